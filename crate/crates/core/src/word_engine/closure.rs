//! Bounded search for a derivation showing a word lies in the normal
//! closure of the relators.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::presentation::GroupPresentation;
use crate::word::Word;

/// Insert a rotation of a relator (or of its inverse) at `position`, then
/// freely reduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Insertion {
    pub position: usize,
    pub relator: usize,
    pub rotation: usize,
    pub inverse: bool,
}

fn inserted(p: &GroupPresentation, w: &Word, step: &Insertion) -> Result<Word, String> {
    let r = p.relators().get(step.relator).ok_or_else(|| format!("no relator #{}", step.relator))?;
    if step.position > w.len() {
        return Err(format!("position {} beyond word of length {}", step.position, w.len()));
    }
    if step.rotation >= r.len().max(1) {
        return Err(format!("rotation {} out of range", step.rotation));
    }
    let r = if step.inverse { r.inverse() } else { r.clone() };
    let mut letters = w.letters()[..step.position].to_vec();
    letters.extend_from_slice(r.rotate(step.rotation).letters());
    letters.extend_from_slice(&w.letters()[step.position..]);
    Ok(Word(letters).free_reduce())
}

/// Replays a derivation and checks that it ends at the empty word.
pub fn replay(p: &GroupPresentation, w: &Word, steps: &[Insertion]) -> Result<(), String> {
    p.check_word(w).map_err(|e| e.to_string())?;
    let mut current = w.free_reduce();
    for step in steps {
        current = inserted(p, &current, step)?;
    }
    if current.is_empty() {
        Ok(())
    } else {
        Err(format!("derivation ends at {current}, not the empty word"))
    }
}

/// Outcome of [`derivation_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureSearch {
    Found(Vec<Insertion>),
    Exhausted,
    NodeLimit,
}

/// Breadth-first search over insertion sequences of length at most
/// `max_depth`. Only insertions that cancel at least one letter are tried,
/// and words too long to be emptied in the remaining steps are dropped.
pub fn derivation_search(p: &GroupPresentation, w: &Word, max_depth: usize, node_limit: usize) -> ClosureSearch {
    let start = w.free_reduce();
    if start.is_empty() {
        return ClosureSearch::Found(Vec::new());
    }
    let longest = p.relators().iter().map(Word::len).max().unwrap_or(0);
    if longest == 0 {
        return ClosureSearch::Exhausted;
    }
    // nodes: (word, parent, step, depth)
    let mut nodes: Vec<(Word, usize, Option<Insertion>, usize)> = vec![(start.clone(), usize::MAX, None, 0)];
    let mut seen: HashSet<Word> = HashSet::from([start]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (word, _, _, depth) = nodes[i].clone();
        if depth == max_depth {
            continue;
        }
        let remaining = max_depth - depth - 1;
        for (ri, r) in p.relators().iter().enumerate() {
            for inverse in [false, true] {
                for rotation in 0..r.len() {
                    for position in 0..=word.len() {
                        let step = Insertion { position, relator: ri, rotation, inverse };
                        let next = inserted(p, &word, &step).expect("generated steps are in range");
                        if next.len() + 2 > word.len() + r.len() || next.len() > remaining * longest {
                            continue;
                        }
                        if !seen.insert(next.clone()) {
                            continue;
                        }
                        if nodes.len() >= node_limit {
                            return ClosureSearch::NodeLimit;
                        }
                        let empty = next.is_empty();
                        nodes.push((next, i, Some(step), depth + 1));
                        if empty {
                            let mut steps = Vec::new();
                            let mut at = nodes.len() - 1;
                            while let Some(s) = nodes[at].2 {
                                steps.push(s);
                                at = nodes[at].1;
                            }
                            steps.reverse();
                            return ClosureSearch::Found(steps);
                        }
                        queue.push_back(nodes.len() - 1);
                    }
                }
            }
        }
    }
    ClosureSearch::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baumslag_solitar() -> GroupPresentation {
        // ⟨a, b | a b a⁻¹ b⁻²⟩
        GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1), (1, -1)])],
        )
        .unwrap()
    }

    #[test]
    fn conjugated_relator_is_derived() {
        let p = baumslag_solitar();
        let r = p.relators()[0].clone();
        let w = Word::power(1, 1).concat(&r).concat(&Word::power(1, -1));
        let ClosureSearch::Found(steps) = derivation_search(&p, &w, 2, 100_000) else {
            panic!("expected a derivation");
        };
        assert_eq!(steps.len(), 1);
        replay(&p, &w, &steps).unwrap();
    }

    #[test]
    fn product_of_two_relators() {
        let p = baumslag_solitar();
        let r = p.relators()[0].clone();
        let w = r.rotate(2).concat(&r.inverse().rotate(1));
        let ClosureSearch::Found(steps) = derivation_search(&p, &w, 3, 1_000_000) else {
            panic!("expected a derivation");
        };
        replay(&p, &w, &steps).unwrap();
    }

    #[test]
    fn nontrivial_word_is_not_derived() {
        let p = baumslag_solitar();
        assert_ne!(derivation_search(&p, &Word::power(0, 1), 3, 100_000), ClosureSearch::Found(Vec::new()));
        assert!(!matches!(derivation_search(&p, &Word::power(0, 1), 3, 100_000), ClosureSearch::Found(_)));
    }

    #[test]
    fn bad_derivations_are_rejected() {
        let p = baumslag_solitar();
        let w = p.relators()[0].clone();
        let wrong = [Insertion { position: 0, relator: 0, rotation: 0, inverse: false }];
        assert!(replay(&p, &w, &wrong).is_err());
        let out_of_range = [Insertion { position: 99, relator: 0, rotation: 0, inverse: true }];
        assert!(replay(&p, &w, &out_of_range).is_err());
        let right = [Insertion { position: 0, relator: 0, rotation: 0, inverse: true }];
        assert!(replay(&p, &w, &right).is_ok());
    }
}
