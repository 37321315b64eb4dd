//! Shortest nontrivial elements in the kernel of a quotient map.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Budget, Claim, Status, WordEngine};
use crate::error::{Error, Result};
use crate::presentation::{GroupPresentation, Homomorphism};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum KernelSearch {
    Found {
        length: usize,
        word: Word,
        /// the word is trivial in the target
        in_target: Claim,
        /// the word is nontrivial in the source
        in_source: Claim,
        /// false when some shorter candidate had an Unknown status
        certified_minimal: bool,
        checked: usize,
        unknown: usize,
    },
    NotFoundWithinRadius {
        radius: usize,
        checked: usize,
        unknown: usize,
    },
}

/// Breadth-first search for the shortest word that is trivial in `p_t` but
/// not in `p_s`, over the common generators.
///
/// When the source has an exact normal form the search runs over distinct
/// source elements, so each candidate is checked once at its word length;
/// otherwise every freely reduced word up to `radius` is a candidate.
pub fn kernel_shortest_element(
    p_s: &GroupPresentation,
    p_t: &GroupPresentation,
    quotient: &Homomorphism,
    radius: usize,
    budget: &Budget,
) -> Result<KernelSearch> {
    if quotient.source != *p_s || quotient.target != *p_t || !quotient.is_generator_identity() {
        return Err(Error::GeneratorMismatch);
    }
    let source = WordEngine::new(p_s.clone(), *budget);
    let target = WordEngine::new(p_t.clone(), *budget);
    let letters: Vec<Letter> = (0..2 * p_s.generator_count()).map(Letter::from_index).collect();
    let mut checked = 0usize;
    let mut unknown = 0usize;

    let mut examine = |w: &Word, known_nontrivial: bool| -> Result<Option<KernelSearch>> {
        checked += 1;
        let in_target = target.claim(w)?;
        match in_target.verdict.status {
            Status::Refuted => return Ok(None),
            Status::Unknown => {
                unknown += 1;
                return Ok(None);
            }
            Status::Proved => {}
        }
        let in_source = source.claim(w)?;
        match in_source.verdict.status {
            Status::Refuted => Ok(Some(KernelSearch::Found {
                length: w.len(),
                word: w.clone(),
                in_target,
                in_source,
                certified_minimal: unknown == 0,
                checked,
                unknown,
            })),
            Status::Unknown => {
                debug_assert!(!known_nontrivial);
                unknown += 1;
                Ok(None)
            }
            Status::Proved => Ok(None),
        }
    };

    let exact = source.recognition().filter(|r| r.group.normal_form(&Word::empty()).is_some()).cloned();
    if let Some(rec) = exact {
        let key = |w: &Word| rec.group.key(&w.substitute(&rec.images)).expect("exact groups have keys");
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::from([(key(&Word::empty()), ())]);
        let mut queue = VecDeque::from([Word::empty()]);
        while let Some(w) = queue.pop_front() {
            if w.len() == radius {
                continue;
            }
            for &l in &letters {
                let mut next = w.clone();
                next.push(l);
                if seen.insert(key(&next), ()).is_some() {
                    continue;
                }
                if let Some(found) = examine(&next, true)? {
                    return Ok(found);
                }
                queue.push_back(next);
            }
        }
    } else {
        for len in 1..=radius {
            for w in crate::word::reduced_words(p_s.generator_count(), len) {
                if let Some(found) = examine(&w, false)? {
                    return Ok(found);
                }
            }
        }
    }
    Ok(KernelSearch::NotFoundWithinRadius { radius, checked, unknown })
}
