//! Taut loop length spectra and k-relatedness of length sets.
//!
//! A loop of length `l` is taut when it is not null-homotopic once every
//! strictly shorter loop is filled in. At group level this asks whether the
//! loop word is nontrivial in `⟨gens | trivial words of length < l⟩`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cayley::{build_ball, graph_cycles};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::oracle::WordOracle;
use crate::presentation::{truncated_presentation, GroupPresentation};
use crate::word::{Letter, Word};
use crate::word_engine::{verify_claim, Budget, Claim, Status, WordEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tautness {
    Taut,
    NotTaut,
    Unknown,
}

impl Tautness {
    pub fn symbol(self) -> char {
        match self {
            Tautness::Taut => '#',
            Tautness::NotTaut => '.',
            Tautness::Unknown => '?',
        }
    }
}

/// Status of one length. A Taut entry carries the claim refuting
/// triviality of one loop; a NotTaut entry carries one proved claim per
/// loop of that length; an Unknown entry carries every claim examined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthStatus {
    pub length: usize,
    pub status: Tautness,
    pub loops: usize,
    pub claims: Vec<Claim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub source: String,
    pub horizon: usize,
    pub entries: Vec<LengthStatus>,
}

/// Decides the status of length `l` given the loop words shorter than `l`
/// (already known trivial) and the loop words of length exactly `l`.
fn decide(generators: &[String], shorter: &[Word], exact: &[Word], l: usize, budget: &Budget) -> Result<LengthStatus> {
    let truncated = truncated_presentation(generators, shorter, l)?;
    status_in(truncated, exact, l, budget)
}

fn status_in(truncated: GroupPresentation, exact: &[Word], l: usize, budget: &Budget) -> Result<LengthStatus> {
    let engine = WordEngine::new(truncated, *budget);
    let mut claims = Vec::new();
    let mut unknown = false;
    for w in exact {
        let claim = engine.claim(w)?;
        match claim.verdict.status {
            Status::Refuted => {
                return Ok(LengthStatus { length: l, status: Tautness::Taut, loops: exact.len(), claims: vec![claim] });
            }
            Status::Unknown => unknown = true,
            Status::Proved => {}
        }
        claims.push(claim);
    }
    let status = if unknown { Tautness::Unknown } else { Tautness::NotTaut };
    Ok(LengthStatus { length: l, status, loops: exact.len(), claims })
}

/// Status of a single length in the Cayley graph of the oracle's group.
pub fn taut_status(oracle: &dyn WordOracle, l: usize, budget: &Budget) -> Result<LengthStatus> {
    if l < 3 {
        return Err(Error::Invalid(format!("taut length must be at least 3, got {l}")));
    }
    let mut s = cayley_spectrum_range(oracle, l, l, budget)?;
    Ok(s.entries.pop().expect("one length requested"))
}

/// Spectrum of the Cayley graph of the oracle's group for lengths
/// `3..=horizon`. Loops are based at the identity, which suffices by
/// vertex transitivity.
pub fn cayley_spectrum(oracle: &dyn WordOracle, horizon: usize, budget: &Budget) -> Result<Spectrum> {
    cayley_spectrum_range(oracle, 3, horizon, budget)
}

fn cayley_spectrum_range(oracle: &dyn WordOracle, from: usize, horizon: usize, budget: &Budget) -> Result<Spectrum> {
    // every closed path of length ≤ horizon at the center stays within
    // distance ⌊horizon/2⌋
    let ball = build_ball(oracle, horizon / 2)?;
    let loops = ball.closed_loops(horizon).loops;
    let mut trivial = ball.short_relations();
    trivial.extend(loops.iter().cloned());
    let mut entries = Vec::new();
    for l in from..=horizon {
        let exact: Vec<Word> = loops.iter().filter(|w| w.len() == l).cloned().collect();
        entries.push(decide(oracle.generators(), &trivial, &exact, l, budget)?);
    }
    Ok(Spectrum { source: format!("cayley:{}", oracle.tag()), horizon, entries })
}

/// Spectrum of an arbitrary finite simplicial graph. Loops over all
/// basepoints are rewritten as words in the chords of a spanning forest.
pub fn graph_spectrum(graph: &SimpleGraph, horizon: usize, budget: &Budget) -> Result<Spectrum> {
    let chords = Chords::new(graph);
    let cycles = graph_cycles(graph, horizon);
    let words: Vec<(usize, Word)> = cycles.iter().map(|c| (c.len(), chords.rewrite(c))).collect();
    let mut entries = Vec::new();
    for l in 3..=horizon {
        let shorter: Vec<Word> = words.iter().filter(|(n, _)| *n < l).map(|(_, w)| w.cyclic_reduce()).collect();
        let exact: Vec<Word> = words.iter().filter(|(n, _)| *n == l).map(|(_, w)| w.clone()).collect();
        let truncated = GroupPresentation::new(chords.names.clone(), shorter)?;
        entries.push(status_in(truncated, &exact, l, budget)?);
    }
    Ok(Spectrum { source: format!("graph({}v,{}e)", graph.vertex_count(), graph.edge_count()), horizon, entries })
}

/// Chords of a breadth-first spanning forest, one generator each.
struct Chords {
    names: Vec<String>,
    /// chord index of the edge `(min, max)`, if it is a chord
    index: std::collections::HashMap<(usize, usize), usize>,
}

impl Chords {
    fn new(graph: &SimpleGraph) -> Self {
        let n = graph.vertex_count();
        let mut seen = vec![false; n];
        let mut tree = BTreeSet::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in graph.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        tree.insert((u.min(v), u.max(v)));
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut names = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (u, v) in graph.edges() {
            if !tree.contains(&(u, v)) {
                index.insert((u, v), names.len());
                names.push(format!("c:{}:{}", graph.name(u), graph.name(v)));
            }
        }
        Chords { names, index }
    }

    /// The product of chord letters along a closed walk.
    fn rewrite(&self, cycle: &[usize]) -> Word {
        let n = cycle.len();
        Word::from_letters((0..n).filter_map(|i| {
            let (u, v) = (cycle[i], cycle[(i + 1) % n]);
            self.index.get(&(u.min(v), u.max(v))).map(|&c| if u < v { Letter::pos(c) } else { Letter::neg(c) })
        }))
    }
}

impl Spectrum {
    pub fn status(&self, l: usize) -> Option<Tautness> {
        self.entries.iter().find(|e| e.length == l).map(|e| e.status)
    }

    pub fn taut_lengths(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.status == Tautness::Taut).map(|e| e.length).collect()
    }

    pub fn unknown_lengths(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.status == Tautness::Unknown).map(|e| e.length).collect()
    }

    /// Taut lengths as a length set, known up to the last length before the
    /// first Unknown.
    pub fn length_set(&self) -> LengthSet {
        let horizon = match self.unknown_lengths().first() {
            Some(&u) => u - 1,
            None => self.horizon,
        };
        LengthSet::bounded(self.taut_lengths().into_iter().filter(|&l| l <= horizon).map(|l| l as u64), horizon as u64)
    }

    pub fn claims(&self) -> impl Iterator<Item = &Claim> {
        self.entries.iter().flat_map(|e| e.claims.iter())
    }

    /// Replays every certificate and checks that each status is backed by
    /// the claims it needs.
    pub fn verify(&self) -> Result<()> {
        for e in &self.entries {
            for c in &e.claims {
                verify_claim(c)?;
            }
            let bad = |m: &str| Err(Error::Certificate(format!("length {}: {m}", e.length)));
            match e.status {
                Tautness::Taut if e.claims.len() != 1 || e.claims[0].verdict.status != Status::Refuted => {
                    return bad("taut without a refuted loop");
                }
                Tautness::NotTaut
                    if e.claims.len() != e.loops || e.claims.iter().any(|c| c.verdict.status != Status::Proved) =>
                {
                    return bad("not every loop is proved trivial");
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `length,status,certificateRef` rows; the reference names the claims
    /// of that length in the JSON form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,status,certificateRef\n");
        for e in &self.entries {
            let status = serde_json::to_value(e.status).unwrap();
            let refs = (0..e.claims.len())
                .filter(|&i| e.claims[i].verdict.certificate.is_some())
                .map(|i| format!("L{}#{}", e.length, i))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(out, "{},{},{}", e.length, status.as_str().unwrap(), refs).unwrap();
        }
        out
    }

    /// One symbol per length (`#` taut, `.` not taut, `?` unknown) followed
    /// by the taut lengths grouped into runs.
    pub fn chart(&self) -> String {
        let mut out = String::new();
        let first = self.entries.first().map_or(3, |e| e.length);
        writeln!(out, "{:>4} {}", first, self.entries.iter().map(|e| e.status.symbol()).collect::<String>()).unwrap();
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for l in self.taut_lengths() {
            match runs.last_mut() {
                Some(r) if r.1 + 1 == l => r.1 = l,
                _ => runs.push((l, l)),
            }
        }
        let runs: Vec<String> =
            runs.iter().map(|&(a, b)| if a == b { format!("{{{a}}}") } else { format!("[{a},{b}]") }).collect();
        writeln!(out, "H = {}", if runs.is_empty() { "∅".to_string() } else { runs.join(" ∪ ") }).unwrap();
        let unknown = self.unknown_lengths();
        if !unknown.is_empty() {
            writeln!(out, "unknown: {unknown:?}").unwrap();
        }
        out
    }
}

/// A set of lengths, known exactly up to `horizon` (everywhere when `None`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthSet {
    pub elements: BTreeSet<BigUint>,
    pub horizon: Option<BigUint>,
}

impl LengthSet {
    pub fn unbounded(elements: impl IntoIterator<Item = u64>) -> Self {
        LengthSet { elements: elements.into_iter().map(BigUint::from).collect(), horizon: None }
    }

    pub fn bounded(elements: impl IntoIterator<Item = u64>, horizon: u64) -> Self {
        LengthSet { elements: elements.into_iter().map(BigUint::from).collect(), horizon: Some(horizon.into()) }
    }

    fn known(&self, l: &BigUint) -> bool {
        self.horizon.as_ref().is_none_or(|h| l <= h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KRelation {
    Related,
    /// `witness` lies in the set named by `side` and has no partner.
    NotRelated {
        witness: BigUint,
        side: Side,
    },
    UnknownBeyondHorizon {
        first: BigUint,
    },
}

pub fn threshold(k: &BigUint) -> BigUint {
    k * k + k * 2u32 + 2u32
}

/// Whether every `l ≥ k²+2k+2` in either set has a partner `l'` in the
/// other with `l/k ≤ l' ≤ lk`.
///
/// A definite failure anywhere wins; otherwise the least length whose
/// check depends on unknown territory is reported.
pub fn k_related(h1: &LengthSet, h2: &LengthSet, k: u64) -> KRelation {
    assert!(k >= 1, "k must be positive");
    let k = BigUint::from(k);
    let t = threshold(&k);
    let mut failure: Option<(BigUint, Side)> = None;
    let mut unknown: Option<BigUint> = None;
    let note_unknown = |l: BigUint, unknown: &mut Option<BigUint>| {
        if unknown.as_ref().is_none_or(|u| l < *u) {
            *unknown = Some(l);
        }
    };
    for (mine, other, side) in [(h1, h2, Side::First), (h2, h1, Side::Second)] {
        for l in mine.elements.iter().filter(|l| **l >= t) {
            let lo = (l + &k - BigUint::one()) / &k;
            let hi = l * &k;
            if other.elements.range(lo.clone()..=hi.clone()).next().is_some() {
                continue;
            }
            if other.known(&hi) {
                if failure.as_ref().is_none_or(|(f, _)| l < f) {
                    failure = Some((l.clone(), side));
                }
            } else {
                note_unknown(l.clone(), &mut unknown);
            }
        }
        // elements past the horizon of `mine` are not listed
        if let Some(h) = &mine.horizon {
            note_unknown((h + BigUint::one()).max(t.clone()), &mut unknown);
        }
    }
    match (failure, unknown) {
        (Some((witness, side)), _) => KRelation::NotRelated { witness, side },
        (None, Some(first)) => KRelation::UnknownBeyondHorizon { first },
        (None, None) => KRelation::Related,
    }
}

/// Convenience for tests and reports.
pub fn to_u64(n: &BigUint) -> Option<u64> {
    if n.is_zero() {
        Some(0)
    } else {
        n.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::samples;
    use crate::oracle::PresentationOracle;
    use crate::presentation::build_p;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn cycle_graphs() {
        for n in 3..=7 {
            let s = graph_spectrum(&SimpleGraph::cycle(n), 8, &budget()).unwrap();
            assert_eq!(s.taut_lengths(), vec![n]);
            assert!(s.unknown_lengths().is_empty());
            s.verify().unwrap();
        }
    }

    #[test]
    fn trees_and_complete_graphs() {
        let tree = graph_spectrum(&SimpleGraph::path(6), 8, &budget()).unwrap();
        assert!(tree.taut_lengths().is_empty());
        assert!(tree.unknown_lengths().is_empty());
        let k4 = graph_spectrum(&SimpleGraph::complete(4), 8, &budget()).unwrap();
        assert_eq!(k4.taut_lengths(), vec![3]);
        k4.verify().unwrap();
    }

    #[test]
    fn cyclic_group_of_order_five() {
        let p = GroupPresentation::new(vec!["a".into()], vec![Word::power(0, 5)]).unwrap();
        let o = PresentationOracle::new(p, budget());
        assert_eq!(taut_status(&o, 5, &budget()).unwrap().status, Tautness::Taut);
        assert_eq!(taut_status(&o, 10, &budget()).unwrap().status, Tautness::NotTaut);
        let s = cayley_spectrum(&o, 10, &budget()).unwrap();
        assert_eq!(s.taut_lengths(), vec![5]);
        s.verify().unwrap();
    }

    #[test]
    fn infinite_cyclic_has_no_loops() {
        let p = GroupPresentation::free(vec!["a".into()]);
        let o = PresentationOracle::new(p, budget());
        let s = cayley_spectrum(&o, 6, &budget()).unwrap();
        assert!(s.entries.iter().all(|e| e.status == Tautness::NotTaut && e.loops == 0));
    }

    #[test]
    fn triangle_length_detects_two_dimensional_complexes() {
        let omega = crate::complexes::OmegaSet::new(vec![]);
        let zero = BTreeSet::from([0]);
        let c4 = build_p(&samples::cycle(4), &omega, &zero).unwrap();
        let o = PresentationOracle::new(c4, budget());
        assert_eq!(taut_status(&o, 3, &budget()).unwrap().status, Tautness::NotTaut);
        let tri = build_p(&samples::simplex(2), &omega, &zero).unwrap();
        let o = PresentationOracle::new(tri, budget());
        assert_eq!(taut_status(&o, 3, &budget()).unwrap().status, Tautness::Taut);
    }

    #[test]
    fn k_related_examples() {
        let a = LengthSet::unbounded([3, 100]);
        assert_eq!(k_related(&a, &a, 1), KRelation::Related);
        let h1 = LengthSet::unbounded([10]);
        let h2 = LengthSet::unbounded([50]);
        assert_eq!(k_related(&h1, &h2, 3), KRelation::NotRelated { witness: BigUint::from(50u32), side: Side::Second });
        assert_eq!(k_related(&h1, &h2, 7), KRelation::Related);
        assert_eq!(threshold(&BigUint::from(3u32)), BigUint::from(17u32));
    }

    #[test]
    fn horizons_limit_conclusions() {
        let h1 = LengthSet::bounded([20], 30);
        let h2 = LengthSet::unbounded([20]);
        assert_eq!(k_related(&h1, &h2, 1), KRelation::UnknownBeyondHorizon { first: BigUint::from(31u32) });
        // a partner interval reaching past the horizon is not decisive
        let h3 = LengthSet::bounded([], 30);
        assert_eq!(k_related(&h2, &h3, 2), KRelation::UnknownBeyondHorizon { first: BigUint::from(20u32) });
    }

    #[test]
    fn csv_and_chart() {
        let s = graph_spectrum(&SimpleGraph::cycle(5), 8, &budget()).unwrap();
        let csv = s.to_csv();
        assert!(csv.lines().any(|l| l.starts_with("5,taut,L5#0")));
        assert!(s.chart().contains("H = {5}"));
        let json = serde_json::to_string(&s).unwrap();
        let back: Spectrum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
