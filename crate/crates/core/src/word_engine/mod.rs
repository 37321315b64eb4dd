//! Layered word-problem oracle with replayable certificates.
//!
//! [`WordEngine::is_trivial`] tries, in order: free reduction, exact
//! recognition of the presentation, registered homomorphisms into exact
//! groups, coset enumeration, finite quotient search and a bounded
//! normal-closure search. Every decisive answer carries a [`Certificate`]
//! that [`verify_claim`] checks against the presentation alone.

pub mod cache;
pub mod closure;
pub mod coset;
pub mod exact;
pub mod kernel;
pub mod quotient;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use cache::CertCache;
pub use closure::{derivation_search, ClosureSearch, Insertion};
pub use coset::{todd_coxeter, BudgetExceeded, CosetTable};
pub use exact::{recognize, ExactGroup, Recognition};
pub use kernel::{kernel_shortest_element, KernelSearch};
pub use quotient::{finite_quotient_search, QuotientSearch, QuotientWitness, MAX_DEGREE_CAP};

use crate::error::{Error, Result};
use crate::presentation::{GroupPresentation, Homomorphism};
use crate::word::{Letter, Word};

/// Deterministic resource limits. `max_deductions` also caps the number of
/// nodes visited by the quotient and normal-closure searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    pub max_cosets: usize,
    pub max_deductions: usize,
    pub max_search_depth: usize,
    pub max_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_cosets: 100_000, max_deductions: 1_000_000, max_search_depth: 4, max_degree: 6 }
    }
}

impl Budget {
    pub fn small() -> Self {
        Budget { max_cosets: 2_000, max_deductions: 20_000, max_search_depth: 2, max_degree: 4 }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cosets:{},depth:{},deductions:{},degree:{}",
            self.max_cosets, self.max_search_depth, self.max_deductions, self.max_degree
        )
    }
}

impl FromStr for Budget {
    type Err = Error;

    /// Parses `cosets:N,depth:M[,deductions:K][,degree:D]`; omitted fields
    /// keep their defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut b = Budget::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once(':').ok_or_else(|| Error::Invalid(format!("budget field {part}")))?;
            let value: usize = value.trim().parse().map_err(|_| Error::Invalid(format!("budget value {value}")))?;
            if value == 0 {
                return Err(Error::Invalid(format!("budget field {key} must be positive")));
            }
            match key.trim() {
                "cosets" => b.max_cosets = value,
                "depth" => b.max_search_depth = value,
                "deductions" => b.max_deductions = value,
                "degree" => b.max_degree = value.min(MAX_DEGREE_CAP),
                other => return Err(Error::Invalid(format!("unknown budget field {other}"))),
            }
        }
        Ok(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proved,
    Refuted,
    Unknown,
}

/// Evidence for a Proved or Refuted answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A complete coset table of the trivial subgroup produced by a
    /// deterministic enumeration under `budget`.
    CosetTable {
        budget: Budget,
        subgroup: Vec<Word>,
        table: CosetTable,
    },
    Quotient {
        witness: QuotientWitness,
    },
    NormalClosure {
        steps: Vec<Insertion>,
    },
    /// A homomorphism into an exact group; `isomorphism` marks the map
    /// produced by [`recognize`].
    Exact {
        group: ExactGroup,
        images: Vec<Word>,
        isomorphism: bool,
    },
    /// Nontriviality of a group shown through one of its elements.
    Witnessed {
        word: Word,
        inner: Box<Certificate>,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::CosetTable { .. } => "coset_table",
            Certificate::Quotient { .. } => "quotient",
            Certificate::NormalClosure { .. } => "normal_closure",
            Certificate::Exact { .. } => "exact",
            Certificate::Witnessed { .. } => "witnessed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriState {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl TriState {
    pub fn unknown() -> Self {
        TriState { status: Status::Unknown, certificate: None }
    }

    pub fn proved(c: Certificate) -> Self {
        TriState { status: Status::Proved, certificate: Some(c) }
    }

    pub fn refuted(c: Certificate) -> Self {
        TriState { status: Status::Refuted, certificate: Some(c) }
    }
}

/// What a claim is about: one word being trivial, or the whole group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subject {
    Word { word: Word },
    WholeGroup,
}

/// A self-contained statement "subject is trivial in presentation" with its
/// verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub presentation: GroupPresentation,
    pub subject: Subject,
    pub verdict: TriState,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn check_map(p: &GroupPresentation, group: &ExactGroup, images: &[Word]) -> Result<()> {
    group.validate().map_err(reject)?;
    if images.len() != p.generator_count() {
        return Err(reject("one image per generator is required"));
    }
    if images.iter().any(|w| w.generator_bound() > group.generator_count()) {
        return Err(reject("image uses a generator the target lacks"));
    }
    for r in p.relators() {
        if !group.is_identity(&r.substitute(images)) {
            return Err(reject(format!("relator {} does not map to the identity", p.format_word(r))));
        }
    }
    Ok(())
}

fn check_isomorphism(p: &GroupPresentation, group: &ExactGroup, images: &[Word]) -> Result<()> {
    match recognize(p) {
        Some(rec) if rec.group == *group && rec.images == images => Ok(()),
        _ => Err(reject("recognition does not reproduce the claimed isomorphism")),
    }
}

fn check_table(p: &GroupPresentation, budget: &Budget, subgroup: &[Word], table: &CosetTable) -> Result<()> {
    table.is_valid_for(p, subgroup).map_err(reject)?;
    match todd_coxeter(p, subgroup, budget) {
        Ok(replayed) if replayed == *table => Ok(()),
        Ok(_) => Err(reject("replayed enumeration gives a different table")),
        Err(BudgetExceeded) => Err(reject("replayed enumeration exceeds the recorded budget")),
    }
}

fn verify_word(p: &GroupPresentation, w: &Word, verdict: &TriState) -> Result<()> {
    p.check_word(w)?;
    let cert = match (&verdict.status, &verdict.certificate) {
        (Status::Unknown, None) => return Ok(()),
        (Status::Unknown, Some(_)) => return Err(reject("Unknown verdicts carry no certificate")),
        (_, None) => return Err(reject("decisive verdict without certificate")),
        (_, Some(c)) => c,
    };
    match (verdict.status, cert) {
        (Status::Proved, Certificate::CosetTable { budget, subgroup, table }) => {
            if !subgroup.is_empty() {
                return Err(reject("word claims need the trivial subgroup"));
            }
            check_table(p, budget, subgroup, table)?;
            if table.trace(0, w) != Some(0) {
                return Err(reject("word moves coset 0"));
            }
            Ok(())
        }
        (Status::Proved, Certificate::NormalClosure { steps }) => closure::replay(p, w, steps).map_err(reject),
        (Status::Proved, Certificate::Exact { group, images, isomorphism: true }) => {
            check_map(p, group, images)?;
            check_isomorphism(p, group, images)?;
            if group.is_identity(&w.substitute(images)) {
                Ok(())
            } else {
                Err(reject("image of the word is not the identity"))
            }
        }
        (Status::Refuted, Certificate::Quotient { witness }) => {
            if witness.word != *w {
                return Err(reject("witness is for a different word"));
            }
            witness.verify(p).map_err(reject)
        }
        (Status::Refuted, Certificate::Exact { group, images, .. }) => {
            check_map(p, group, images)?;
            if group.is_identity(&w.substitute(images)) {
                Err(reject("image of the word is the identity"))
            } else {
                Ok(())
            }
        }
        (status, c) => Err(reject(format!("a {} certificate cannot support {status:?}", c.kind()))),
    }
}

fn verify_group(p: &GroupPresentation, verdict: &TriState) -> Result<()> {
    let cert = match (&verdict.status, &verdict.certificate) {
        (Status::Unknown, None) => return Ok(()),
        (Status::Unknown, Some(_)) => return Err(reject("Unknown verdicts carry no certificate")),
        (_, None) => return Err(reject("decisive verdict without certificate")),
        (_, Some(c)) => c,
    };
    match (verdict.status, cert) {
        (Status::Proved, Certificate::CosetTable { budget, subgroup, table }) => {
            if !subgroup.is_empty() || table.index() != 1 {
                return Err(reject("triviality needs a one-coset table of the trivial subgroup"));
            }
            check_table(p, budget, subgroup, table)
        }
        (Status::Proved, Certificate::Exact { group, images, isomorphism: true }) => {
            check_map(p, group, images)?;
            check_isomorphism(p, group, images)?;
            if group.is_trivial_group() {
                Ok(())
            } else {
                Err(reject("recognized group is not trivial"))
            }
        }
        (Status::Refuted, Certificate::Witnessed { word, inner }) => {
            verify_word(p, word, &TriState { status: Status::Refuted, certificate: Some((**inner).clone()) })
        }
        (status, c) => Err(reject(format!("a {} certificate cannot support {status:?} for a group", c.kind()))),
    }
}

/// Independent check of a claim's certificate against its presentation.
pub fn verify_claim(claim: &Claim) -> Result<()> {
    match &claim.subject {
        Subject::Word { word } => verify_word(&claim.presentation, word, &claim.verdict),
        Subject::WholeGroup => verify_group(&claim.presentation, &claim.verdict),
    }
}

/// Word-problem engine for one presentation. Recognition and the coset
/// table of the trivial subgroup are computed once and reused.
pub struct WordEngine {
    presentation: GroupPresentation,
    budget: Budget,
    recognition: Option<Recognition>,
    maps: Vec<(ExactGroup, Vec<Word>)>,
    table: OnceLock<Option<CosetTable>>,
    cache: Option<CertCache>,
}

impl WordEngine {
    pub fn new(presentation: GroupPresentation, budget: Budget) -> Self {
        let recognition = recognize(&presentation).filter(|r| r.group.validate().is_ok());
        WordEngine { presentation, budget, recognition, maps: Vec::new(), table: OnceLock::new(), cache: None }
    }

    /// Registers a homomorphism into an exact group, used to refute words
    /// whose image is nontrivial. Fails unless every relator maps to the
    /// identity.
    pub fn with_map(mut self, group: ExactGroup, images: Vec<Word>) -> Result<Self> {
        check_map(&self.presentation, &group, &images)?;
        self.maps.push((group, images));
        Ok(self)
    }

    pub fn with_cache(mut self, cache: CertCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn recognition(&self) -> Option<&Recognition> {
        self.recognition.as_ref()
    }

    /// Complete coset table of the trivial subgroup, if enumeration closes
    /// within budget.
    pub fn coset_table(&self) -> Option<&CosetTable> {
        self.table
            .get_or_init(|| {
                if let Some(cache) = &self.cache {
                    if let Some(hit) = cache.load(&self.presentation, &[], &self.budget) {
                        return hit;
                    }
                }
                let t = todd_coxeter(&self.presentation, &[], &self.budget).ok();
                if let Some(cache) = &self.cache {
                    // a failed write only costs a recomputation later
                    let _ = cache.store(&self.presentation, &[], &self.budget, &t);
                }
                t
            })
            .as_ref()
    }

    fn exact_certificate(&self, rec: &Recognition) -> Certificate {
        Certificate::Exact { group: rec.group.clone(), images: rec.images.clone(), isomorphism: true }
    }

    pub fn is_trivial(&self, w: &Word) -> Result<TriState> {
        self.presentation.check_word(w)?;
        if w.free_reduce().is_empty() {
            return Ok(TriState::proved(Certificate::NormalClosure { steps: Vec::new() }));
        }
        if let Some(rec) = &self.recognition {
            let cert = self.exact_certificate(rec);
            return Ok(if rec.group.is_identity(&w.substitute(&rec.images)) {
                TriState::proved(cert)
            } else {
                TriState::refuted(cert)
            });
        }
        for (group, images) in &self.maps {
            if !group.is_identity(&w.substitute(images)) {
                return Ok(TriState::refuted(Certificate::Exact {
                    group: group.clone(),
                    images: images.clone(),
                    isomorphism: false,
                }));
            }
        }
        if let Some(table) = self.coset_table() {
            if table.trace(0, w) == Some(0) {
                return Ok(TriState::proved(Certificate::CosetTable {
                    budget: self.budget,
                    subgroup: Vec::new(),
                    table: table.clone(),
                }));
            }
            let witness = quotient::witness_from_table(table, w).expect("complete tables trace every word");
            return Ok(TriState::refuted(Certificate::Quotient { witness }));
        }
        if let QuotientSearch::Found(witness) =
            finite_quotient_search(&self.presentation, w, self.budget.max_degree, self.budget.max_deductions)
        {
            return Ok(TriState::refuted(Certificate::Quotient { witness }));
        }
        if let ClosureSearch::Found(steps) =
            derivation_search(&self.presentation, w, self.budget.max_search_depth, self.budget.max_deductions)
        {
            return Ok(TriState::proved(Certificate::NormalClosure { steps }));
        }
        Ok(TriState::unknown())
    }

    /// Whether `u` and `v` are equal, as triviality of `u v⁻¹`.
    pub fn equal(&self, u: &Word, v: &Word) -> Result<TriState> {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    pub fn claim(&self, w: &Word) -> Result<Claim> {
        Ok(Claim {
            presentation: self.presentation.clone(),
            subject: Subject::Word { word: w.clone() },
            verdict: self.is_trivial(w)?,
        })
    }

    /// Whether the presented group is trivial.
    pub fn group_is_trivial(&self) -> TriState {
        let generators = (0..self.presentation.generator_count()).map(|g| Word(vec![Letter::pos(g)]));
        if let Some(rec) = &self.recognition {
            let cert = self.exact_certificate(rec);
            if rec.group.is_trivial_group() {
                return TriState::proved(cert);
            }
            let word = generators
                .clone()
                .find(|g| !rec.group.is_identity(&g.substitute(&rec.images)))
                .expect("a nontrivial exact group has a surviving generator");
            return TriState::refuted(Certificate::Witnessed { word, inner: Box::new(cert) });
        }
        if let Some(table) = self.coset_table() {
            if table.index() == 1 {
                return TriState::proved(Certificate::CosetTable {
                    budget: self.budget,
                    subgroup: Vec::new(),
                    table: table.clone(),
                });
            }
            let word = generators.clone().find(|g| table.trace(0, g) != Some(0)).expect("a transitive action moves 0");
            let witness = quotient::witness_from_table(table, &word).unwrap();
            return TriState::refuted(Certificate::Witnessed {
                word,
                inner: Box::new(Certificate::Quotient { witness }),
            });
        }
        for g in generators {
            if let QuotientSearch::Found(witness) =
                finite_quotient_search(&self.presentation, &g, self.budget.max_degree, self.budget.max_deductions)
            {
                return TriState::refuted(Certificate::Witnessed {
                    word: g,
                    inner: Box::new(Certificate::Quotient { witness }),
                });
            }
        }
        TriState::unknown()
    }
}

/// Convenience wrapper: one-off triviality check.
pub fn is_trivial(p: &GroupPresentation, w: &Word, budget: &Budget) -> Result<TriState> {
    WordEngine::new(p.clone(), *budget).is_trivial(w)
}

pub fn is_group_trivial(p: &GroupPresentation, budget: &Budget) -> TriState {
    WordEngine::new(p.clone(), *budget).group_is_trivial()
}

/// Checks that every source relator maps to a trivial word of the target,
/// one verdict per relator.
pub fn check_homomorphism(h: &Homomorphism, budget: &Budget) -> Vec<Claim> {
    let engine = WordEngine::new(h.target.clone(), *budget);
    h.source.relators().iter().map(|r| engine.claim(&h.apply(r)).expect("images use target generators")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::samples::*;
    use crate::complexes::OmegaSet;
    use crate::graph::SimpleGraph;
    use crate::presentation::{build_p, build_raag_on_graph, build_racg, long_cycle_relator};

    fn one_gen(relators: &[i64]) -> GroupPresentation {
        GroupPresentation::new(vec!["a".into()], relators.iter().map(|&n| Word::power(0, n)).collect()).unwrap()
    }

    fn check(p: &GroupPresentation, w: &Word, budget: &Budget) -> Status {
        let engine = WordEngine::new(p.clone(), *budget);
        let claim = engine.claim(w).unwrap();
        verify_claim(&claim).unwrap();
        claim.verdict.status
    }

    #[test]
    fn budget_round_trip() {
        let b: Budget = "cosets:500,depth:3".parse().unwrap();
        assert_eq!(b.max_cosets, 500);
        assert_eq!(b.max_search_depth, 3);
        assert_eq!(b.max_deductions, Budget::default().max_deductions);
        assert_eq!(b.to_string().parse::<Budget>().unwrap(), b);
        assert!("cosets:0".parse::<Budget>().is_err());
        assert!("speed:3".parse::<Budget>().is_err());
    }

    #[test]
    fn commutator_in_raag_is_proved() {
        let p = build_raag_on_graph(&SimpleGraph::path(2));
        let w = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert_eq!(check(&p, &w, &Budget::default()), Status::Proved);
    }

    #[test]
    fn long_cycle_word_is_refuted() {
        let sq = cycle(4);
        let boundary = boundary_loop(&sq, 4);
        let p = build_p(&sq, &OmegaSet::new(vec![boundary.clone()]), &[0].into_iter().collect()).unwrap();
        let w = long_cycle_relator(&sq, boundary.edges(), 1);
        assert_eq!(check(&p, &w, &Budget::default()), Status::Refuted);
    }

    #[test]
    fn order_two_examples() {
        let p = one_gen(&[2]);
        assert_eq!(check(&p, &Word::power(0, 3), &Budget::default()), Status::Refuted);
        assert_eq!(check(&p, &Word::power(0, 1), &Budget::default()), Status::Refuted);
        assert_eq!(check(&p, &Word::power(0, 4), &Budget::default()), Status::Proved);
    }

    #[test]
    fn finite_group_uses_coset_table() {
        // S3 = ⟨a, b | a², b³, (ab)²⟩ is not recognized as anything special
        let s3 = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::power(0, 2), Word::power(1, 3), Word::from_pairs(&[(0, 1), (1, 1), (0, 1), (1, 1)])],
        )
        .unwrap();
        let engine = WordEngine::new(s3.clone(), Budget::default());
        assert!(engine.recognition().is_none());
        let proved = engine.claim(&Word::from_pairs(&[(1, 1), (0, 1), (1, 1), (0, 1)])).unwrap();
        assert_eq!(proved.verdict.status, Status::Proved);
        assert_eq!(proved.verdict.certificate.as_ref().unwrap().kind(), "coset_table");
        verify_claim(&proved).unwrap();
        let refuted = engine.claim(&Word::from_pairs(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(refuted.verdict.status, Status::Refuted);
        verify_claim(&refuted).unwrap();
    }

    #[test]
    fn tampered_certificates_fail() {
        let p = one_gen(&[5]);
        let engine = WordEngine::new(p.clone(), Budget::default());
        let mut claim = engine.claim(&Word::power(0, 5)).unwrap();
        verify_claim(&claim).unwrap();
        claim.subject = Subject::Word { word: Word::power(0, 4) };
        assert!(verify_claim(&claim).is_err());
        claim.verdict.status = Status::Refuted;
        claim.verdict.certificate = Some(Certificate::NormalClosure { steps: vec![] });
        assert!(verify_claim(&claim).is_err());
        let unknown_with_cert = Claim {
            presentation: p,
            subject: Subject::WholeGroup,
            verdict: TriState {
                status: Status::Unknown,
                certificate: Some(Certificate::NormalClosure { steps: vec![] }),
            },
        };
        assert!(verify_claim(&unknown_with_cert).is_err());
    }

    #[test]
    fn group_triviality() {
        let b = Budget::default();
        assert_eq!(is_group_trivial(&one_gen(&[1]), &b).status, Status::Proved);
        assert_eq!(is_group_trivial(&one_gen(&[2]), &b).status, Status::Refuted);
        // ⟨a, b | a b a⁻¹ b⁻², b a b⁻¹ a⁻²⟩ is trivial but not recognized
        let p = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![
                Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1), (1, -1)]),
                Word::from_pairs(&[(1, 1), (0, 1), (1, -1), (0, -1), (0, -1)]),
            ],
        )
        .unwrap();
        let verdict = is_group_trivial(&p, &b);
        assert_eq!(verdict.status, Status::Proved);
        verify_claim(&Claim { presentation: p, subject: Subject::WholeGroup, verdict }).unwrap();
    }

    #[test]
    fn registered_maps_refute() {
        // ⟨a, b | a² b³⟩ with a ↦ t³, b ↦ t⁻² into ℤ
        let p = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::from_pairs(&[(0, 1), (0, 1), (1, 1), (1, 1), (1, 1)])],
        )
        .unwrap();
        let images = vec![Word::power(0, 3), Word::power(0, -2)];
        let engine = WordEngine::new(p, Budget::small()).with_map(ExactGroup::Free { rank: 1 }, images).unwrap();
        let claim = engine.claim(&Word::power(0, 1)).unwrap();
        assert_eq!(claim.verdict.status, Status::Refuted);
        verify_claim(&claim).unwrap();
        let bad = WordEngine::new(one_gen(&[2]), Budget::small())
            .with_map(ExactGroup::Free { rank: 1 }, vec![Word::power(0, 1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn racg_agrees_with_coset_enumeration() {
        let g = SimpleGraph::path(3);
        let p = build_racg(&g);
        let engine = WordEngine::new(p.clone(), Budget::default());
        assert!(matches!(engine.recognition().unwrap().group, ExactGroup::Racg { .. }));
        let finite = build_racg(&SimpleGraph::complete(3));
        let table = todd_coxeter(&finite, &[], &Budget::default()).unwrap();
        let exact = WordEngine::new(finite.clone(), Budget::default());
        for w in crate::word::reduced_words(3, 4) {
            let by_table = table.trace(0, &w) == Some(0);
            let by_engine = exact.is_trivial(&w).unwrap().status == Status::Proved;
            assert_eq!(by_table, by_engine, "{w}");
        }
    }

    #[test]
    fn homomorphism_relators_checked() {
        let s = one_gen(&[6]);
        let t = one_gen(&[3]);
        let h = Homomorphism::generator_identity(s, t).unwrap();
        let claims = check_homomorphism(&h, &Budget::default());
        assert!(claims.iter().all(|c| c.verdict.status == Status::Proved));
    }
}
