//! Presentations whose word problem is solved exactly.
//!
//! [`recognize`] eliminates generators that some relator expresses through
//! the others, then classifies what is left.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::graph::SimpleGraph;
use crate::normal_forms::{raag_normal_form_unchecked, tits_reduce_unchecked};
use crate::presentation::GroupPresentation;
use crate::word::{Letter, Word};

/// A group with an always-terminating solution to the word problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactGroup {
    Free {
        rank: usize,
    },
    /// Finite cyclic of the given order (at least 1).
    Cyclic {
        order: u64,
    },
    Raag {
        graph: SimpleGraph,
    },
    Racg {
        graph: SimpleGraph,
    },
    /// A C′(1/6) presentation, solved by Dehn's algorithm.
    SmallCancellation {
        generators: usize,
        relators: Vec<Word>,
    },
}

impl ExactGroup {
    pub fn tag(&self) -> String {
        match self {
            ExactGroup::Free { rank } => format!("free({rank})"),
            ExactGroup::Cyclic { order } => format!("cyclic({order})"),
            ExactGroup::Raag { graph } => format!("raag({}v,{}e)", graph.vertex_count(), graph.edge_count()),
            ExactGroup::Racg { graph } => format!("racg({}v,{}e)", graph.vertex_count(), graph.edge_count()),
            ExactGroup::SmallCancellation { relators, .. } => format!("dehn({} relators)", relators.len()),
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            ExactGroup::Free { rank } => *rank,
            ExactGroup::Cyclic { .. } => 1,
            ExactGroup::Raag { graph } | ExactGroup::Racg { graph } => graph.vertex_count(),
            ExactGroup::SmallCancellation { generators, .. } => *generators,
        }
    }

    /// Internal consistency; for small cancellation groups this re-checks
    /// the C′(1/6) condition that makes Dehn's algorithm correct.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            ExactGroup::Cyclic { order: 0 } => Err("cyclic order must be positive".into()),
            ExactGroup::SmallCancellation { generators, relators } => {
                if relators.iter().any(|r| r.generator_bound() > *generators) {
                    return Err("relator uses an undeclared generator".into());
                }
                if satisfies_c_prime_sixth(relators) {
                    Ok(())
                } else {
                    Err("relators do not satisfy C'(1/6)".into())
                }
            }
            _ => Ok(()),
        }
    }

    /// Unique representative of the element, when the engine has one.
    pub fn normal_form(&self, w: &Word) -> Option<Word> {
        match self {
            ExactGroup::Free { .. } => Some(w.free_reduce()),
            ExactGroup::Cyclic { order } => {
                let e: i64 = w.exponent_vector(1)[0];
                Some(Word::power(0, e.rem_euclid(*order as i64)))
            }
            ExactGroup::Raag { graph } => Some(raag_normal_form_unchecked(graph, w)),
            ExactGroup::Racg { graph } => {
                let letters: Vec<usize> = w.letters().iter().map(|l| l.gen()).collect();
                Some(Word::from_letters(tits_reduce_unchecked(graph, &letters).into_iter().map(Letter::pos)))
            }
            ExactGroup::SmallCancellation { .. } => None,
        }
    }

    /// Exact hashable key for the element, when available.
    pub fn key(&self, w: &Word) -> Option<Vec<i64>> {
        self.normal_form(w).map(|nf| nf.letters().iter().map(|l| l.index() as i64).collect())
    }

    pub fn is_identity(&self, w: &Word) -> bool {
        match self {
            ExactGroup::SmallCancellation { relators, .. } => dehn_reduce(relators, w).is_empty(),
            _ => self.normal_form(w).is_some_and(|nf| nf.is_empty()),
        }
    }

    pub fn is_trivial_group(&self) -> bool {
        match self {
            ExactGroup::Free { rank } => *rank == 0,
            ExactGroup::Cyclic { order } => *order == 1,
            ExactGroup::Raag { graph } | ExactGroup::Racg { graph } => graph.vertex_count() == 0,
            ExactGroup::SmallCancellation { generators, .. } => *generators == 0,
        }
    }
}

/// An isomorphism from a presentation onto an exact group, given by the
/// images of the presentation's generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recognition {
    pub group: ExactGroup,
    pub images: Vec<Word>,
}

/// Result of eliminating generators through relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    /// Indices (into the original generators) of the surviving generators.
    pub survivors: Vec<usize>,
    /// Image of each original generator as a word in the survivors.
    pub images: Vec<Word>,
    /// Relators over the survivors, cyclically reduced and deduplicated.
    pub relators: Vec<Word>,
}

/// Tietze eliminations: whenever a generator occurs exactly once in a
/// relator, that relator expresses it through the others. Shortest relators
/// are used first, and among their once-occurring generators the last one
/// is eliminated.
pub fn eliminate_generators(p: &GroupPresentation) -> Reduced {
    let n = p.generator_count();
    let mut images: Vec<Word> = (0..n).map(|g| Word(vec![Letter::pos(g)])).collect();
    let mut alive = vec![true; n];
    let mut relators: Vec<Word> = p.relators().to_vec();
    loop {
        relators = relators.iter().map(|r| r.substitute(&images).cyclic_reduce()).filter(|r| !r.is_empty()).collect();
        let mut step = None;
        let mut order: Vec<&Word> = relators.iter().collect();
        order.sort_by_key(|r| r.len());
        for r in order {
            let once = (0..n).rev().find(|&g| r.letters().iter().filter(|l| l.gen() == g).count() == 1);
            if let Some(g) = once {
                // r = u g^e v, so g^e = u⁻¹ v⁻¹
                let k = r.letters().iter().position(|l| l.gen() == g).unwrap();
                let u = Word(r.letters()[..k].to_vec());
                let v = Word(r.letters()[k + 1..].to_vec());
                let value = u.inverse().concat(&v.inverse());
                let value = if r.letters()[k].inverse { value.inverse() } else { value };
                step = Some((g, value.free_reduce()));
                break;
            }
        }
        let Some((g, value)) = step else { break };
        alive[g] = false;
        let mut subst: Vec<Word> = (0..n).map(|h| Word(vec![Letter::pos(h)])).collect();
        subst[g] = value;
        for img in &mut images {
            *img = img.substitute(&subst).free_reduce();
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
    let mut renumber = vec![usize::MAX; n];
    for (i, &g) in survivors.iter().enumerate() {
        renumber[g] = i;
    }
    let rename = |w: &Word| {
        Word::from_letters(
            w.letters().iter().map(|l| Letter { generator: renumber[l.gen()] as u32, inverse: l.inverse }),
        )
    };
    let images = images.iter().map(rename).collect();
    let mut seen = std::collections::HashSet::new();
    let relators = relators.iter().map(rename).filter(|r| seen.insert(r.cyclic_canonical())).collect();
    Reduced { survivors, images, relators }
}

fn is_commutator(r: &Word) -> Option<(usize, usize)> {
    match r.letters() {
        [a, b, c, d] if a.gen() != b.gen() && *c == a.inv() && *d == b.inv() => Some((a.gen(), b.gen())),
        _ => None,
    }
}

fn is_coxeter_square(r: &Word) -> Option<usize> {
    match r.letters() {
        [a, b] if a == b => Some(a.gen()),
        _ => None,
    }
}

fn is_coxeter_edge(r: &Word) -> Option<(usize, usize)> {
    match r.letters() {
        [a, b, c, d] if a.gen() != b.gen() && a.gen() == c.gen() && b.gen() == d.gen() => Some((a.gen(), b.gen())),
        _ => None,
    }
}

fn classify(names: Vec<String>, relators: &[Word]) -> Option<ExactGroup> {
    let n = names.len();
    if relators.is_empty() {
        return Some(ExactGroup::Free { rank: n });
    }
    if n == 1 {
        let order = relators.iter().fold(0i64, |acc, r| acc.gcd(&r.exponent_vector(1)[0]));
        return Some(ExactGroup::Cyclic { order: order.unsigned_abs() });
    }
    if let Some(edges) = relators.iter().map(is_commutator).collect::<Option<Vec<_>>>() {
        let pairs: std::collections::BTreeSet<(usize, usize)> =
            edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let pairs: Vec<_> = pairs.into_iter().collect();
        return SimpleGraph::from_indices(names, &pairs).ok().map(|graph| ExactGroup::Raag { graph });
    }
    let squares: std::collections::BTreeSet<usize> = relators.iter().filter_map(is_coxeter_square).collect();
    if squares.len() == n {
        let rest: Vec<&Word> = relators.iter().filter(|r| is_coxeter_square(r).is_none()).collect();
        if let Some(edges) = rest.iter().map(|r| is_coxeter_edge(r)).collect::<Option<Vec<_>>>() {
            let pairs: std::collections::BTreeSet<(usize, usize)> =
                edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            let pairs: Vec<_> = pairs.into_iter().collect();
            return SimpleGraph::from_indices(names, &pairs).ok().map(|graph| ExactGroup::Racg { graph });
        }
    }
    let cyclic: Vec<Word> = relators.iter().map(Word::cyclic_reduce).collect();
    if satisfies_c_prime_sixth(&cyclic) {
        return Some(ExactGroup::SmallCancellation { generators: n, relators: cyclic });
    }
    None
}

/// Recognizes `p` as a free, cyclic, right-angled Artin or Coxeter, or
/// C′(1/6) group after eliminating generators.
pub fn recognize(p: &GroupPresentation) -> Option<Recognition> {
    let reduced = eliminate_generators(p);
    let names = reduced.survivors.iter().map(|&g| p.generators()[g].clone()).collect();
    let group = classify(names, &reduced.relators)?;
    Some(Recognition { group, images: reduced.images })
}

/// All rotations of every relator and of its inverse.
pub fn symmetrize(relators: &[Word]) -> Vec<Word> {
    let mut out = Vec::new();
    for r in relators {
        let r = r.cyclic_reduce();
        for base in [r.clone(), r.inverse()] {
            for k in 0..base.len() {
                out.push(base.rotate(k));
            }
        }
    }
    out
}

fn common_prefix(a: &Word, b: &Word) -> usize {
    a.letters().iter().zip(b.letters()).take_while(|(x, y)| x == y).count()
}

/// Metric small cancellation: every piece is shorter than a sixth of each
/// relator containing it.
pub fn satisfies_c_prime_sixth(relators: &[Word]) -> bool {
    if relators.iter().any(|r| r.cyclic_reduce().is_empty()) {
        return false;
    }
    let sym = symmetrize(relators);
    for i in 0..sym.len() {
        for j in i + 1..sym.len() {
            let piece = common_prefix(&sym[i], &sym[j]);
            if 6 * piece >= sym[i].len().min(sym[j].len()) {
                return false;
            }
        }
    }
    true
}

/// Dehn's algorithm: replaces more than half of a symmetrized relator by the
/// inverse of its complement until no such subword remains.
pub fn dehn_reduce(relators: &[Word], w: &Word) -> Word {
    let sym = symmetrize(relators);
    let mut current = w.free_reduce();
    'outer: loop {
        for i in 0..current.len() {
            let tail = Word(current.letters()[i..].to_vec());
            let best = sym
                .iter()
                .map(|r| (common_prefix(r, &tail), r))
                .filter(|(k, r)| 2 * k > r.len())
                .max_by_key(|(k, _)| *k);
            if let Some((k, r)) = best {
                let complement = Word(r.letters()[k..].to_vec()).inverse();
                let mut next = current.letters()[..i].to_vec();
                next.extend_from_slice(complement.letters());
                next.extend_from_slice(&current.letters()[i + k..]);
                current = Word(next).free_reduce();
                continue 'outer;
            }
        }
        return current;
    }
}
