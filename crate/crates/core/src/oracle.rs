//! Equality oracles over a fixed generating set, used to build Cayley balls.

use crate::complexes::{normally_generates, FlagComplex, OmegaSet};
use crate::error::{Error, Result};
use crate::normal_forms::bb_image;
use crate::presentation::GroupPresentation;
use crate::word::Word;
use crate::word_engine::{Budget, CertCache, Recognition, Status, WordEngine};

/// Decides equality of words in a group with a fixed generating set.
///
/// When `key` returns `Some`, equal keys must mean equal elements and vice
/// versa. Otherwise callers fall back on `bucket`, an invariant that agrees
/// on equal elements, followed by pairwise `is_identity` checks.
pub trait WordOracle {
    fn tag(&self) -> String;
    fn generators(&self) -> &[String];
    fn key(&self, w: &Word) -> Result<Option<Vec<i64>>>;
    fn bucket(&self, _w: &Word) -> Vec<i64> {
        Vec::new()
    }
    /// Fails with `OracleInsufficient` when the question cannot be settled.
    fn is_identity(&self, w: &Word) -> Result<bool>;
}

/// Oracle backed by the word engine of a presentation.
pub struct PresentationOracle {
    engine: WordEngine,
    /// generators on which every relator has exponent sum zero
    free_sums: Vec<usize>,
}

impl PresentationOracle {
    pub fn new(presentation: GroupPresentation, budget: Budget) -> Self {
        let n = presentation.generator_count();
        let sums: Vec<Vec<i64>> = presentation.relators().iter().map(|r| r.exponent_vector(n)).collect();
        let free_sums = (0..n).filter(|&g| sums.iter().all(|s| s[g] == 0)).collect();
        PresentationOracle { engine: WordEngine::new(presentation, budget), free_sums }
    }

    /// Reuse coset tables from an on-disk cache.
    pub fn with_cache(mut self, cache: CertCache) -> Self {
        self.engine = self.engine.with_cache(cache);
        self
    }

    pub fn engine(&self) -> &WordEngine {
        &self.engine
    }

    fn recognition(&self) -> Option<&Recognition> {
        self.engine.recognition()
    }
}

impl WordOracle for PresentationOracle {
    fn tag(&self) -> String {
        match self.recognition() {
            Some(r) => format!("presentation:{}", r.group.tag()),
            None => format!("presentation:engine[{}]", self.engine.budget()),
        }
    }

    fn generators(&self) -> &[String] {
        self.engine.presentation().generators()
    }

    fn key(&self, w: &Word) -> Result<Option<Vec<i64>>> {
        self.engine.presentation().check_word(w)?;
        if let Some(r) = self.recognition() {
            return Ok(r.group.key(&w.substitute(&r.images)));
        }
        Ok(self.engine.coset_table().map(|t| vec![t.trace(0, w).expect("complete table") as i64]))
    }

    fn bucket(&self, w: &Word) -> Vec<i64> {
        let n = self.engine.presentation().generator_count();
        let sums = w.exponent_vector(n);
        self.free_sums.iter().map(|&g| sums[g]).collect()
    }

    fn is_identity(&self, w: &Word) -> Result<bool> {
        if let Some(r) = self.recognition() {
            self.engine.presentation().check_word(w)?;
            return Ok(r.group.is_identity(&w.substitute(&r.images)));
        }
        match self.engine.is_trivial(w)?.status {
            Status::Proved => Ok(true),
            Status::Refuted => Ok(false),
            Status::Unknown => {
                Err(Error::OracleInsufficient(format!("triviality of {w} under {}", self.engine.budget())))
            }
        }
    }
}

/// The group generated by the directed edges of a simply connected flag
/// complex L, solved through the embedding `x→y ↦ x y⁻¹` into A_L.
pub struct BbOracle {
    complex: FlagComplex,
    generators: Vec<String>,
}

impl BbOracle {
    /// Requires a certificate that L is simply connected; otherwise the
    /// embedding is not known to be injective.
    pub fn new(complex: FlagComplex, budget: &Budget) -> Result<Self> {
        if !complex.graph().is_connected() {
            return Err(Error::Disconnected);
        }
        let claim = normally_generates(&complex, &OmegaSet::new(Vec::new()), budget)?;
        if claim.verdict.status != Status::Proved {
            return Err(Error::OracleInsufficient("the complex is not certified simply connected".into()));
        }
        let generators = complex.directed_edges().iter().map(|&(u, v)| complex.edge_symbol(u, v)).collect();
        Ok(BbOracle { complex, generators })
    }

    pub fn complex(&self) -> &FlagComplex {
        &self.complex
    }
}

impl WordOracle for BbOracle {
    fn tag(&self) -> String {
        format!("bb({}v)", self.complex.vertex_count())
    }

    fn generators(&self) -> &[String] {
        &self.generators
    }

    fn key(&self, w: &Word) -> Result<Option<Vec<i64>>> {
        let nf = bb_image(&self.complex, w)?;
        Ok(Some(nf.letters().iter().map(|l| l.index() as i64).collect()))
    }

    fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(bb_image(&self.complex, w)?.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::samples;
    use crate::word::Letter;

    #[test]
    fn presentation_oracle_on_cyclic_group() {
        let p = GroupPresentation::new(vec!["a".into()], vec![Word::power(0, 5)]).unwrap();
        let o = PresentationOracle::new(p, Budget::default());
        assert!(o.is_identity(&Word::power(0, 10)).unwrap());
        assert!(!o.is_identity(&Word::power(0, 3)).unwrap());
        assert_eq!(o.key(&Word::power(0, 7)).unwrap(), o.key(&Word::power(0, 2)).unwrap());
        assert!(o.tag().contains("cyclic(5)"));
    }

    #[test]
    fn finite_group_uses_coset_traces() {
        // S_3 as ⟨a, b | a², b³, (ab)²⟩ mixed with a redundant relator so it
        // is not recognized structurally
        let a = |e| Word::power(0, e);
        let b = |e| Word::power(1, e);
        let p = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![a(2), b(3), a(1).concat(&b(1)).concat(&a(1)).concat(&b(1))],
        )
        .unwrap();
        let o = PresentationOracle::new(p, Budget::default());
        let mut keys = std::collections::BTreeSet::new();
        for len in 0..=4 {
            for w in crate::word::reduced_words(2, len) {
                keys.insert(o.key(&w).unwrap().unwrap());
            }
        }
        assert_eq!(keys.len(), 6);
        assert!(o.is_identity(&b(1).concat(&a(1)).concat(&b(1)).concat(&a(1))).unwrap());
    }

    #[test]
    fn bucket_respects_relators() {
        let p = GroupPresentation::new(vec!["a".into(), "b".into()], vec![Word::power(0, 3)]).unwrap();
        let o = PresentationOracle::new(p, Budget::default());
        assert_eq!(o.bucket(&Word::from_pairs(&[(0, 1), (1, 1), (1, 1)])), vec![2]);
    }

    #[test]
    fn bb_oracle_requires_simple_connectivity() {
        let edge = samples::simplex(1);
        let o = BbOracle::new(edge, &Budget::default()).unwrap();
        // the two directed edges are mutually inverse
        assert!(o.is_identity(&Word::from_letters([Letter::pos(0), Letter::pos(1)])).unwrap());
        assert!(!o.is_identity(&Word::power(0, 2)).unwrap());
        assert!(matches!(BbOracle::new(samples::cycle(4), &Budget::default()), Err(Error::OracleInsufficient(_))));
    }
}
