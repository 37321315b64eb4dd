//! Group presentations and the constructions that produce them.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complexes::{FlagComplex, OmegaSet};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::word::{Letter, Word};

/// Generators, relators, and an optional pairing of generators that are
/// formally inverse to each other (a generator paired with itself is an
/// involution).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PresentationDoc", into = "PresentationDoc")]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    pairing: Vec<(usize, usize)>,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct PresentationDoc {
    generators: Vec<String>,
    relators: Vec<Vec<(String, i8)>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    involutions: Vec<(String, String)>,
}

impl TryFrom<PresentationDoc> for GroupPresentation {
    type Error = Error;

    fn try_from(doc: PresentationDoc) -> Result<Self> {
        GroupPresentation::from_doc(doc)
    }
}

impl From<GroupPresentation> for PresentationDoc {
    fn from(p: GroupPresentation) -> Self {
        p.to_doc()
    }
}

impl GroupPresentation {
    /// Builds a presentation, dropping relators that cyclically reduce to the
    /// empty word and any relator whose canonical cyclic form repeats an
    /// earlier one.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut unique = HashSet::new();
        let mut names = HashSet::new();
        for g in &generators {
            if !names.insert(g) {
                return Err(Error::Invalid(format!("duplicate generator {g}")));
            }
        }
        let mut kept = Vec::new();
        for r in relators {
            if r.generator_bound() > generators.len() {
                return Err(Error::MalformedWord(format!("relator {r} uses an undeclared generator")));
            }
            let key = r.cyclic_canonical();
            if key.is_empty() {
                continue;
            }
            if unique.insert(key) {
                kept.push(r);
            }
        }
        Ok(GroupPresentation { generators, relators: kept, pairing: Vec::new() })
    }

    pub fn with_pairing(mut self, pairing: Vec<(usize, usize)>) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn free(generators: Vec<String>) -> Self {
        GroupPresentation { generators, relators: Vec::new(), pairing: Vec::new() }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }

    pub fn generator_index(&self, symbol: &str) -> Result<usize> {
        self.generators.iter().position(|g| g == symbol).ok_or_else(|| Error::UnknownGenerator(symbol.to_string()))
    }

    /// Canonical cyclic forms of the relators, as a set.
    pub fn relator_classes(&self) -> BTreeSet<Word> {
        self.relators.iter().map(Word::cyclic_canonical).collect()
    }

    /// Same generators and the same relators up to rotation and inversion.
    pub fn same_group_data(&self, other: &GroupPresentation) -> bool {
        self.generators == other.generators && self.relator_classes() == other.relator_classes()
    }

    /// Rejects words using generators this presentation does not declare.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.generator_bound() > self.generator_count() {
            return Err(Error::MalformedWord(format!("{w} uses an undeclared generator")));
        }
        Ok(())
    }

    pub fn word_from_symbols(&self, letters: &[(String, i8)]) -> Result<Word> {
        letters
            .iter()
            .map(|(s, e)| match e {
                1 | -1 => Ok(Letter::new(self.generator_index(s)?, *e)),
                _ => Err(Error::MalformedWord(format!("exponent {e} on {s}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn word_to_symbols(&self, w: &Word) -> Vec<(String, i8)> {
        w.letters().iter().map(|l| (self.generators[l.gen()].clone(), l.exponent())).collect()
    }

    /// Space-separated symbols with `^-1` on inverse letters.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(
                |l| {
                    if l.inverse {
                        format!("{}^-1", self.generators[l.gen()])
                    } else {
                        self.generators[l.gen()].clone()
                    }
                },
            )
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc_value()).expect("presentation serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc_value()).expect("presentation serializes")
    }

    pub fn to_doc_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).unwrap()
    }

    fn to_doc(&self) -> PresentationDoc {
        PresentationDoc {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| self.word_to_symbols(r)).collect(),
            involutions: self
                .pairing
                .iter()
                .map(|&(a, b)| (self.generators[a].clone(), self.generators[b].clone()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc_value(serde_json::from_str(text)?)
    }

    pub fn from_doc_value(value: serde_json::Value) -> Result<Self> {
        Self::from_doc(serde_json::from_value(value)?)
    }

    fn from_doc(doc: PresentationDoc) -> Result<Self> {
        let free = GroupPresentation::free(doc.generators.clone());
        let relators = doc.relators.iter().map(|r| free.word_from_symbols(r)).collect::<Result<Vec<_>>>()?;
        let pairing = doc
            .involutions
            .iter()
            .map(|(a, b)| Ok((free.generator_index(a)?, free.generator_index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupPresentation::new(doc.generators, relators)?.with_pairing(pairing))
    }

    /// Plain-text export readable by GAP.
    pub fn to_gap(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = self.generators.iter().map(|g| format!("\"{g}\"")).collect();
        writeln!(out, "F := FreeGroup({});;", if names.is_empty() { "0".into() } else { names.join(", ") }).unwrap();
        writeln!(out, "gens := GeneratorsOfGroup(F);;").unwrap();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                r.letters()
                    .iter()
                    .map(|l| format!("gens[{}]{}", l.gen() + 1, if l.inverse { "^-1" } else { "" }))
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        writeln!(out, "G := F / [{}];;", rels.join(", ")).unwrap();
        out
    }

    /// Adds relators, keeping the generator set and pairing.
    pub fn with_extra_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        Ok(GroupPresentation::new(self.generators.clone(), relators)?.with_pairing(self.pairing.clone()))
    }
}

/// Relator families of the presentation of G_L(S), kept apart for reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelatorCensus {
    pub edge: usize,
    pub triangle: usize,
    pub long_cycle: usize,
}

/// Edge relators `a ā`, one per undirected edge of L.
pub fn edge_relators(complex: &FlagComplex) -> Vec<Word> {
    (0..complex.graph().edge_count())
        .map(|k| Word::from_letters([Letter::pos(2 * k), Letter::pos(2 * k + 1)]))
        .collect()
}

/// Triangle relators `abc` and `a⁻¹b⁻¹c⁻¹` for the directed triangle
/// `x→y→z→x` of each 2-simplex `x < y < z`.
pub fn triangle_relators(complex: &FlagComplex) -> Vec<Word> {
    let mut out = Vec::new();
    for s in complex.simplices_of_dim(2) {
        let (x, y, z) = (s[0], s[1], s[2]);
        let e = |u, v| complex.directed_edge_index(u, v).expect("simplex edges exist");
        let (a, b, c) = (e(x, y), e(y, z), e(z, x));
        out.push(Word::from_letters([Letter::pos(a), Letter::pos(b), Letter::pos(c)]));
        out.push(Word::from_letters([Letter::neg(a), Letter::neg(b), Letter::neg(c)]));
    }
    out
}

/// `a_1^n a_2^n ... a_l^n` for a loop of Ω.
pub fn long_cycle_relator(complex: &FlagComplex, edges: &[(usize, usize)], n: i64) -> Word {
    let mut w = Word::empty();
    for &(u, v) in edges {
        let g = complex.directed_edge_index(u, v).expect("loop edges exist");
        for l in Word::power(g, n).0 {
            w.push(l);
        }
    }
    w
}

/// The presentation P(L, Ω) with long-cycle relators for `n ∈ S ∖ {0}`.
///
/// Generators are the directed edges `e:x:y` of L, ordered as
/// [`FlagComplex::directed_edges`].
pub fn build_p(complex: &FlagComplex, omega: &OmegaSet, s: &BTreeSet<i64>) -> Result<GroupPresentation> {
    Ok(build_p_with_census(complex, omega, s)?.0)
}

pub fn build_p_with_census(
    complex: &FlagComplex,
    omega: &OmegaSet,
    s: &BTreeSet<i64>,
) -> Result<(GroupPresentation, RelatorCensus)> {
    if !s.contains(&0) {
        return Err(Error::MissingZero);
    }
    if !complex.graph().is_connected() {
        return Err(Error::Disconnected);
    }
    for l in &omega.loops {
        crate::complexes::EdgeLoop::from_edges(complex, l.edges().to_vec())?;
    }
    let generators: Vec<String> = complex.directed_edges().iter().map(|&(u, v)| complex.edge_symbol(u, v)).collect();
    let edges = edge_relators(complex);
    let triangles = triangle_relators(complex);
    let mut longs = Vec::new();
    for &n in s.iter().filter(|&&n| n != 0) {
        for l in &omega.loops {
            longs.push(long_cycle_relator(complex, l.edges(), n));
        }
    }
    let before = (edges.len(), triangles.len());
    let mut relators = edges;
    relators.extend(triangles);
    relators.extend(longs);
    let total = relators.len();
    let pairing = (0..complex.graph().edge_count()).map(|k| (2 * k, 2 * k + 1)).collect();
    let p = GroupPresentation::new(generators, relators)?.with_pairing(pairing);
    let dropped = total - p.relators().len();
    let census =
        RelatorCensus { edge: before.0, triangle: before.1, long_cycle: total - before.0 - before.1 - dropped };
    Ok((p, census))
}

/// Right-angled Artin group: vertex generators, commutators along edges.
pub fn build_raag(complex: &FlagComplex) -> GroupPresentation {
    build_raag_on_graph(complex.graph())
}

pub fn build_raag_on_graph(graph: &SimpleGraph) -> GroupPresentation {
    let relators = graph
        .edges()
        .map(|(u, v)| Word::from_letters([Letter::pos(u), Letter::pos(v), Letter::neg(u), Letter::neg(v)]))
        .collect();
    GroupPresentation::new(graph.names().to_vec(), relators).expect("commutators use vertex generators")
}

/// Right-angled Coxeter group: `v²` per vertex and `(vw)²` per edge.
pub fn build_racg(graph: &SimpleGraph) -> GroupPresentation {
    let mut relators: Vec<Word> = (0..graph.vertex_count()).map(|v| Word::power(v, 2)).collect();
    relators.extend(
        graph
            .edges()
            .map(|(u, v)| Word::from_letters([Letter::pos(u), Letter::pos(v), Letter::pos(u), Letter::pos(v)])),
    );
    let pairing = (0..graph.vertex_count()).map(|v| (v, v)).collect();
    GroupPresentation::new(graph.names().to_vec(), relators)
        .expect("Coxeter relators use vertex generators")
        .with_pairing(pairing)
}

/// `⟨gens | supplied trivial words of length < l⟩`, deduplicated up to
/// rotation, inversion and free reduction.
pub fn truncated_presentation(generators: &[String], trivial_words: &[Word], l: usize) -> Result<GroupPresentation> {
    let short: Vec<Word> = trivial_words.iter().filter(|w| w.len() < l).map(|w| w.cyclic_reduce()).collect();
    GroupPresentation::new(generators.to_vec(), short)
}

/// A map given on generators; whether relators go to the identity is
/// checked separately by [`crate::word_engine::check_homomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: GroupPresentation,
    pub target: GroupPresentation,
    pub images: Vec<Word>,
}

impl Homomorphism {
    pub fn new(source: GroupPresentation, target: GroupPresentation, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.generator_count() {
            return Err(Error::GeneratorMismatch);
        }
        for w in &images {
            target.check_word(w)?;
        }
        Ok(Homomorphism { source, target, images })
    }

    /// Identity on generator symbols; requires equal generator lists.
    pub fn generator_identity(source: GroupPresentation, target: GroupPresentation) -> Result<Self> {
        if source.generators() != target.generators() {
            return Err(Error::GeneratorMismatch);
        }
        let images = (0..source.generator_count()).map(|g| Word(vec![Letter::pos(g)])).collect();
        Self::new(source, target, images)
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    pub fn is_generator_identity(&self) -> bool {
        self.source.generators() == self.target.generators()
            && self.images.iter().enumerate().all(|(g, w)| w.0 == [Letter::pos(g)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::samples::*;
    use crate::complexes::OmegaSet;

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn p_for_square() {
        let sq = cycle(4);
        let omega = OmegaSet::new(vec![boundary_loop(&sq, 4)]);
        let (p, census) = build_p_with_census(&sq, &omega, &set(&[0, 2])).unwrap();
        assert_eq!(p.generator_count(), 8);
        assert_eq!(census, RelatorCensus { edge: 4, triangle: 0, long_cycle: 1 });
        let long = p.relators().last().unwrap();
        assert_eq!(long.len(), 8);
        assert_eq!(p.format_word(long), "e:0:1 e:0:1 e:1:2 e:1:2 e:2:3 e:2:3 e:3:0 e:3:0");
        let (p0, c0) = build_p_with_census(&sq, &omega, &set(&[0])).unwrap();
        assert_eq!((p0.generator_count(), c0.long_cycle), (8, 0));
    }

    #[test]
    fn p_for_triangle() {
        let (p, census) = build_p_with_census(&simplex(2), &OmegaSet::default(), &set(&[0])).unwrap();
        assert_eq!(p.generator_count(), 6);
        assert_eq!(census, RelatorCensus { edge: 3, triangle: 2, long_cycle: 0 });
        assert_eq!(p.relators().len(), 5);
    }

    #[test]
    fn p_rejects_bad_input() {
        let sq = cycle(4);
        assert_eq!(build_p(&sq, &OmegaSet::default(), &set(&[1])).unwrap_err(), Error::MissingZero);
        let two = crate::complexes::flag_completion(&SimpleGraph::numbered(2, &[]).unwrap());
        assert_eq!(build_p(&two, &OmegaSet::default(), &set(&[0])).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn p_relators_grow_with_s() {
        let sq = cycle(4);
        let omega = OmegaSet::new(vec![boundary_loop(&sq, 4)]);
        let small = build_p(&sq, &omega, &set(&[0, 2])).unwrap();
        let big = build_p(&sq, &omega, &set(&[0, 2, 3, -1])).unwrap();
        assert!(small.relator_classes().is_subset(&big.relator_classes()));
        assert_eq!(small.generators(), big.generators());
    }

    #[test]
    fn raag_and_racg_counts() {
        let edge = SimpleGraph::complete(2);
        let raag = build_raag_on_graph(&edge);
        assert_eq!((raag.generator_count(), raag.relators().len()), (2, 1));
        let free = build_raag_on_graph(&SimpleGraph::numbered(2, &[]).unwrap());
        assert!(free.relators().is_empty());
        let k3 = build_raag_on_graph(&SimpleGraph::complete(3));
        assert_eq!(k3.relators().len(), 3);
        let racg = build_racg(&edge);
        assert_eq!(racg.relators().len(), 3);
    }

    #[test]
    fn truncation_filters_by_length() {
        let gens = vec!["a".to_string()];
        let a5 = Word::power(0, 5);
        assert!(truncated_presentation(&gens, &[a5.clone()], 5).unwrap().relators().is_empty());
        assert_eq!(truncated_presentation(&gens, &[a5.clone()], 6).unwrap().relators(), &[a5]);
        let sq = cycle(4);
        let p = build_p(&sq, &OmegaSet::new(vec![boundary_loop(&sq, 4)]), &set(&[0, 2])).unwrap();
        let t = truncated_presentation(p.generators(), p.relators(), 3).unwrap();
        assert_eq!(t.relators().len(), 4);
    }

    #[test]
    fn json_round_trip_is_stable() {
        let sq = cycle(4);
        let p = build_p(&sq, &OmegaSet::new(vec![boundary_loop(&sq, 4)]), &set(&[0, 2, -3])).unwrap();
        let text = p.to_json();
        let back = GroupPresentation::from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), text);
        assert!(p.to_gap().contains("G := F / ["));
    }

    #[test]
    fn deduplication_up_to_rotation_and_inversion() {
        let gens = vec!["a".to_string(), "b".to_string()];
        let r = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        let p = GroupPresentation::new(
            gens,
            vec![r.clone(), r.rotate(1), r.inverse(), Word::from_pairs(&[(0, 1), (0, -1)])],
        )
        .unwrap();
        assert_eq!(p.relators(), &[r]);
    }
}
