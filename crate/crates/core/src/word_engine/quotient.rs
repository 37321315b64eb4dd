//! Homomorphisms onto permutation groups as nontriviality witnesses.

use serde::{Deserialize, Serialize};

use crate::presentation::GroupPresentation;
use crate::word::{Letter, Word};

/// Largest symmetric-group degree the search accepts.
pub const MAX_DEGREE_CAP: usize = 8;

/// A permutation action of the generators (points are acted on from the
/// right: `p · g = images[g][p]`) under which every relator is the identity
/// and `word` is not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub degree: usize,
    pub images: Vec<Vec<u32>>,
    pub word: Word,
}

fn inverse(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn is_permutation(p: &[u32], degree: usize) -> bool {
    let mut seen = vec![false; degree];
    p.len() == degree
        && p.iter().all(|&x| {
            let x = x as usize;
            x < degree && !std::mem::replace(&mut seen[x], true)
        })
}

/// Point reached from `point` by reading `w`.
pub fn act(images: &[Vec<u32>], inverses: &[Vec<u32>], point: u32, w: &[Letter]) -> u32 {
    let mut p = point;
    for l in w {
        p = if l.inverse { inverses[l.gen()][p as usize] } else { images[l.gen()][p as usize] };
    }
    p
}

pub fn acts_trivially(images: &[Vec<u32>], inverses: &[Vec<u32>], degree: usize, w: &[Letter]) -> bool {
    (0..degree as u32).all(|p| act(images, inverses, p, w) == p)
}

impl QuotientWitness {
    /// Checks the witness against `p`: valid permutations, relators act
    /// trivially, `word` does not.
    pub fn verify(&self, p: &GroupPresentation) -> Result<(), String> {
        if self.images.len() != p.generator_count() {
            return Err("wrong number of generator images".into());
        }
        if let Some(g) = self.images.iter().position(|img| !is_permutation(img, self.degree)) {
            return Err(format!("image of generator {g} is not a permutation of degree {}", self.degree));
        }
        p.check_word(&self.word).map_err(|e| e.to_string())?;
        let inverses: Vec<Vec<u32>> = self.images.iter().map(|i| inverse(i)).collect();
        for r in p.relators() {
            if !acts_trivially(&self.images, &inverses, self.degree, r.letters()) {
                return Err(format!("relator {} is not mapped to the identity", p.format_word(r)));
            }
        }
        if acts_trivially(&self.images, &inverses, self.degree, self.word.letters()) {
            return Err("witness word maps to the identity".into());
        }
        Ok(())
    }
}

/// All permutations of `0..degree` in lexicographic order.
fn all_permutations(degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (0..degree as u32).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..degree.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..degree).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

struct Search<'a> {
    p: &'a GroupPresentation,
    word: &'a Word,
    degree: usize,
    candidates: Vec<Vec<u32>>,
    /// relators whose highest generator is `g`, indexed by `g`
    closing: Vec<Vec<&'a Word>>,
    used: Vec<bool>,
    images: Vec<Vec<u32>>,
    inverses: Vec<Vec<u32>>,
    nodes: usize,
    node_limit: usize,
}

impl Search<'_> {
    /// A permutation forced for generator `g` by a relator in which `g` is
    /// the only unassigned generator and occurs exactly once.
    fn forced(&self, g: usize) -> Option<Vec<u32>> {
        for r in &self.closing[g] {
            let hits: Vec<usize> =
                r.letters().iter().enumerate().filter(|(_, l)| l.gen() == g).map(|(i, _)| i).collect();
            if hits.len() != 1 {
                continue;
            }
            let k = hits[0];
            let (before, after) = (&r.letters()[..k], &r.letters()[k + 1..]);
            // u x^e v = 1  ⇒  x^e = u⁻¹ v⁻¹
            let mut xe = vec![0u32; self.degree];
            for (p, slot) in xe.iter_mut().enumerate() {
                let u_inv = act(&self.images, &self.inverses, p as u32, &Word(before.to_vec()).inverse().0);
                *slot = act(&self.images, &self.inverses, u_inv, &Word(after.to_vec()).inverse().0);
            }
            return Some(if r.letters()[k].inverse { inverse(&xe) } else { xe });
        }
        None
    }

    fn consistent(&self, g: usize) -> bool {
        self.closing[g].iter().all(|r| acts_trivially(&self.images, &self.inverses, self.degree, r.letters()))
    }

    fn assign(&mut self, g: usize, perm: Vec<u32>) {
        self.inverses[g] = inverse(&perm);
        self.images[g] = perm;
    }

    fn descend(&mut self, g: usize) -> Option<bool> {
        if g == self.images.len() {
            return Some(!acts_trivially(&self.images, &self.inverses, self.degree, self.word.letters()));
        }
        if !self.used[g] {
            self.assign(g, (0..self.degree as u32).collect());
            return self.descend(g + 1);
        }
        if let Some(perm) = self.forced(g) {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return None;
            }
            self.assign(g, perm);
            if self.consistent(g) {
                return self.descend(g + 1);
            }
            return Some(false);
        }
        for i in 0..self.candidates.len() {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return None;
            }
            let perm = self.candidates[i].clone();
            self.assign(g, perm);
            if self.consistent(g) {
                match self.descend(g + 1) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => return None,
                }
            }
        }
        Some(false)
    }
}

/// Outcome of [`finite_quotient_search`]. `NotFound` carries no information
/// about triviality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientSearch {
    Found(QuotientWitness),
    NotFound,
    NodeLimit,
}

/// Backtracking search over homomorphisms into symmetric groups of degree
/// `2..=max_degree`, pruned by relator consistency. Generators are assigned
/// in order, each ranging over permutations in lexicographic order, so the
/// first witness found is the lexicographically first one.
pub fn finite_quotient_search(p: &GroupPresentation, w: &Word, max_degree: usize, node_limit: usize) -> QuotientSearch {
    let max_degree = max_degree.min(MAX_DEGREE_CAP);
    let n = p.generator_count();
    if w.generator_bound() > n || w.free_reduce().is_empty() {
        return QuotientSearch::NotFound;
    }
    let mut closing: Vec<Vec<&Word>> = vec![Vec::new(); n];
    let mut used = vec![false; n];
    for r in p.relators() {
        if let Some(top) = r.letters().iter().map(|l| l.gen()).max() {
            closing[top].push(r);
        }
        for l in r.letters() {
            used[l.gen()] = true;
        }
    }
    for l in w.letters() {
        used[l.gen()] = true;
    }
    let mut nodes = 0;
    for degree in 2..=max_degree {
        let mut search = Search {
            p,
            word: w,
            degree,
            candidates: all_permutations(degree),
            closing: closing.clone(),
            used: used.clone(),
            images: vec![Vec::new(); n],
            inverses: vec![Vec::new(); n],
            nodes,
            node_limit,
        };
        match search.descend(0) {
            Some(true) => {
                let witness = QuotientWitness { degree, images: search.images, word: w.clone() };
                debug_assert!(witness.verify(search.p).is_ok());
                return QuotientSearch::Found(witness);
            }
            Some(false) => nodes = search.nodes,
            None => return QuotientSearch::NodeLimit,
        }
    }
    QuotientSearch::NotFound
}

/// Converts a complete coset table into a witness for `w` when `w` moves
/// coset 0.
pub fn witness_from_table(table: &super::CosetTable, w: &Word) -> Option<QuotientWitness> {
    if table.trace(0, w)? == 0 {
        return None;
    }
    Some(QuotientWitness { degree: table.index(), images: table.permutations(), word: w.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::presentation::build_racg;

    #[test]
    fn permutations_in_order() {
        let all = all_permutations(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 2, 1]);
        assert_eq!(all[5], vec![2, 1, 0]);
    }

    #[test]
    fn free_generator_gets_a_sign_flip() {
        let p = GroupPresentation::free(vec!["a".into()]);
        let QuotientSearch::Found(wit) = finite_quotient_search(&p, &Word::power(0, 1), 8, 1_000_000) else {
            panic!("expected a witness");
        };
        assert_eq!(wit.degree, 2);
        assert!(wit.verify(&p).is_ok());
    }

    #[test]
    fn klein_four_product() {
        let p = build_racg(&SimpleGraph::complete(2));
        let vw = Word::from_pairs(&[(0, 1), (1, 1)]);
        let QuotientSearch::Found(wit) = finite_quotient_search(&p, &vw, 8, 1_000_000) else {
            panic!("expected a witness");
        };
        assert!(wit.degree <= 4);
        assert!(wit.verify(&p).is_ok());
    }

    #[test]
    fn relator_has_no_witness() {
        let p = GroupPresentation::new(vec!["a".into()], vec![Word::power(0, 2)]).unwrap();
        assert_eq!(finite_quotient_search(&p, &Word::power(0, 2), 6, 10_000_000), QuotientSearch::NotFound);
    }

    #[test]
    fn forced_generators_follow_pairing_relators() {
        // <a, b | a b> with w = a: b is forced to a⁻¹
        let p =
            GroupPresentation::new(vec!["a".into(), "b".into()], vec![Word::from_pairs(&[(0, 1), (1, 1)])]).unwrap();
        let QuotientSearch::Found(wit) = finite_quotient_search(&p, &Word::power(0, 1), 4, 1000) else {
            panic!("expected a witness");
        };
        assert_eq!(wit.images[1], inverse(&wit.images[0]));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let p = GroupPresentation::new(vec!["a".into()], vec![Word::power(0, 3)]).unwrap();
        let QuotientSearch::Found(mut wit) = finite_quotient_search(&p, &Word::power(0, 1), 4, 100_000) else {
            panic!("expected a witness");
        };
        assert!(wit.verify(&p).is_ok());
        wit.images[0] = vec![1, 0, 2];
        assert!(wit.verify(&p).is_err());
    }
}
