//! Finite flag complexes, their edge loops, reduced homology and
//! fundamental groups.

use std::collections::{BTreeMap, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{GraphDoc, SimpleGraph};
use crate::presentation::GroupPresentation;
use crate::snf;
use crate::word::{Letter, Word};
use crate::word_engine::{self, Budget, Claim, Subject, TriState};

/// The clique complex of a simple graph. Simplices are derived from the
/// graph on first use and cached.
#[derive(Clone, Debug)]
pub struct FlagComplex {
    graph: SimpleGraph,
    cliques: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for FlagComplex {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for FlagComplex {}

/// Fills in every clique of `graph`. Multi-edges and self-loops are already
/// rejected by [`SimpleGraph`].
pub fn flag_completion(graph: &SimpleGraph) -> FlagComplex {
    FlagComplex { graph: graph.clone(), cliques: OnceLock::new() }
}

impl FlagComplex {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(flag_completion(&SimpleGraph::from_json(text)?))
    }

    pub fn to_doc(&self) -> GraphDoc {
        self.graph.to_doc()
    }

    pub fn to_json(&self) -> String {
        self.graph.to_json()
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn name(&self, v: usize) -> &str {
        self.graph.name(v)
    }

    /// All nonempty cliques as sorted index lists, ordered by size and then
    /// lexicographically.
    pub fn simplices(&self) -> &[Vec<usize>] {
        self.cliques.get_or_init(|| {
            let mut out = Vec::new();
            let mut current = Vec::new();
            for v in 0..self.graph.vertex_count() {
                current.push(v);
                extend_cliques(&self.graph, &mut current, &mut out);
                current.pop();
            }
            out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            out
        })
    }

    /// Simplices of dimension `k`.
    pub fn simplices_of_dim(&self, k: usize) -> Vec<&[usize]> {
        self.simplices().iter().filter(|s| s.len() == k + 1).map(|s| s.as_slice()).collect()
    }

    /// Size of the largest clique minus one; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices().last().map(|s| s.len() - 1)
    }

    /// Number of simplices in each dimension.
    pub fn census(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for s in self.simplices() {
            let k = s.len() - 1;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.census().iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Directed edges in generator order: for each edge `u < v`, `u→v` then `v→u`.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect()
    }

    /// Index of the directed edge `u→v` in [`Self::directed_edges`].
    pub fn directed_edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let pos = self.graph.edges().position(|e| e == (u.min(v), u.max(v)))?;
        Some(2 * pos + usize::from(u > v))
    }

    pub fn edge_symbol(&self, u: usize, v: usize) -> String {
        format!("e:{}:{}", self.name(u), self.name(v))
    }
}

fn extend_cliques(g: &SimpleGraph, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(current.clone());
    let last = *current.last().unwrap();
    for &w in g.neighbors(last) {
        if w > last && current.iter().all(|&u| g.adjacent(u, w)) {
            current.push(w);
            extend_cliques(g, current, out);
            current.pop();
        }
    }
}

/// A closed edge path stored as directed edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeLoop {
    edges: Vec<(usize, usize)>,
}

impl EdgeLoop {
    /// Loop through `vertices` in order and back to the first one.
    pub fn from_vertex_cycle(complex: &FlagComplex, vertices: &[usize]) -> Result<Self> {
        let l = vertices.len();
        let edges: Vec<_> = (0..l).map(|i| (vertices[i], vertices[(i + 1) % l])).collect();
        Self::from_edges(complex, edges)
    }

    pub fn from_names(complex: &FlagComplex, names: &[String]) -> Result<Self> {
        let idx = names.iter().map(|n| complex.graph.index_of(n)).collect::<Result<Vec<_>>>()?;
        Self::from_vertex_cycle(complex, &idx)
    }

    pub fn from_edges(complex: &FlagComplex, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() < 3 {
            return Err(Error::InvalidLoop(format!("length {} is below 3", edges.len())));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= complex.vertex_count() || v >= complex.vertex_count() || !complex.graph.adjacent(u, v) {
                return Err(Error::InvalidLoop(format!("step {i} is not an edge")));
            }
            let next = edges[(i + 1) % edges.len()];
            if next.0 != v {
                return Err(Error::InvalidLoop(format!("step {i} does not continue into step {}", i + 1)));
            }
        }
        Ok(EdgeLoop { edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.0).collect()
    }

    /// The same loop traversed `times` times.
    pub fn repeated(&self, times: usize) -> EdgeLoop {
        EdgeLoop { edges: self.edges.repeat(times) }
    }
}

/// The loops Ω along which discs are attached.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OmegaSet {
    pub loops: Vec<EdgeLoop>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OmegaDoc {
    Wrapped { loops: Vec<Vec<Value>> },
    Bare(Vec<Vec<Value>>),
}

#[derive(Serialize)]
struct OmegaOut {
    loops: Vec<Vec<String>>,
}

impl OmegaSet {
    pub fn new(loops: Vec<EdgeLoop>) -> Self {
        OmegaSet { loops }
    }

    /// Parses `{"loops": [[v0, v1, ...], ...]}` or a bare list of vertex cycles.
    pub fn from_json(complex: &FlagComplex, text: &str) -> Result<Self> {
        let doc: OmegaDoc = serde_json::from_str(text)?;
        let raw = match doc {
            OmegaDoc::Wrapped { loops } | OmegaDoc::Bare(loops) => loops,
        };
        let mut loops = Vec::new();
        for cycle in raw {
            let names = cycle
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(Error::InvalidLoop(format!("bad vertex {other}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            loops.push(EdgeLoop::from_names(complex, &names)?);
        }
        Ok(OmegaSet { loops })
    }

    pub fn to_json(&self, complex: &FlagComplex) -> String {
        let loops =
            self.loops.iter().map(|l| l.vertices().iter().map(|&v| complex.name(v).to_string()).collect()).collect();
        serde_json::to_string_pretty(&OmegaOut { loops }).unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }
}

/// Reduced integral homology in one degree: `Z^rank ⊕ ⨁ Z/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Boundary matrix from `k`-simplices to `(k-1)`-simplices; for `k = 0` the
/// augmentation row.
fn boundary_matrix(complex: &FlagComplex, k: usize) -> Vec<Vec<BigInt>> {
    let cols = complex.simplices_of_dim(k);
    if k == 0 {
        return vec![vec![BigInt::one(); cols.len()]];
    }
    let rows = complex.simplices_of_dim(k - 1);
    let index: BTreeMap<&[usize], usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for drop in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
            let i = index[face.as_slice()];
            m[i][j] = if drop % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        }
    }
    m
}

/// Reduced homology `H̃_degree(L; Z)` via Smith normal form.
pub fn reduced_homology(complex: &FlagComplex, degree: usize) -> Result<HomologyGroup> {
    let dimension = complex.dimension().unwrap_or(0);
    if degree > dimension {
        return Err(Error::DegreeTooLarge { degree, dimension });
    }
    let chains = complex.simplices_of_dim(degree).len();
    let rank_out = snf::invariant_factors(&boundary_matrix(complex, degree)).len();
    let incoming =
        if degree < dimension { snf::invariant_factors(&boundary_matrix(complex, degree + 1)) } else { Vec::new() };
    Ok(HomologyGroup { rank: chains - rank_out - incoming.len(), torsion: snf::torsion(&incoming) })
}

pub fn is_acyclic(complex: &FlagComplex) -> bool {
    let d = complex.dimension().unwrap_or(0);
    (0..=d).all(|k| reduced_homology(complex, k).map(|h| h.is_trivial()).unwrap_or(false))
}

/// Spanning tree grown breadth-first from `basepoint`, lowest index first.
/// Returns tree edges as sorted pairs.
fn spanning_tree(complex: &FlagComplex, basepoint: usize) -> Result<Vec<(usize, usize)>> {
    let g = complex.graph();
    let mut seen = vec![false; g.vertex_count()];
    seen[basepoint] = true;
    let mut queue = VecDeque::from([basepoint]);
    let mut tree = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                tree.push((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }
    tree.sort_unstable();
    Ok(tree)
}

/// Chord generators for π₁ plus a rewriting map from directed edges to words.
struct ChordPresentation {
    generators: Vec<String>,
    chord_of: BTreeMap<(usize, usize), usize>,
}

impl ChordPresentation {
    fn build(complex: &FlagComplex, basepoint: usize) -> Result<Self> {
        if basepoint >= complex.vertex_count() {
            return Err(Error::UnknownVertex(basepoint.to_string()));
        }
        let tree = spanning_tree(complex, basepoint)?;
        let mut generators = Vec::new();
        let mut chord_of = BTreeMap::new();
        for (u, v) in complex.graph().edges() {
            if tree.binary_search(&(u, v)).is_err() {
                chord_of.insert((u, v), generators.len());
                generators.push(complex.edge_symbol(u, v));
            }
        }
        Ok(ChordPresentation { generators, chord_of })
    }

    fn rewrite(&self, edges: &[(usize, usize)]) -> Word {
        let mut w = Word::empty();
        for &(a, b) in edges {
            if let Some(&g) = self.chord_of.get(&(a.min(b), a.max(b))) {
                w.push(if a < b { Letter::pos(g) } else { Letter::neg(g) });
            }
        }
        w.free_reduce()
    }

    fn triangle_relators(&self, complex: &FlagComplex) -> Vec<Word> {
        complex.simplices_of_dim(2).iter().map(|s| self.rewrite(&[(s[0], s[1]), (s[1], s[2]), (s[2], s[0])])).collect()
    }
}

/// Presentation of π₁(L, basepoint): chords of a breadth-first spanning tree
/// modulo the boundaries of 2-simplices, with generators that some relator
/// kills outright eliminated.
pub fn pi1_presentation(complex: &FlagComplex, basepoint: usize) -> Result<GroupPresentation> {
    let chords = ChordPresentation::build(complex, basepoint)?;
    let relators = chords.triangle_relators(complex);
    Ok(eliminate_killed_generators(chords.generators, relators))
}

/// Repeatedly deletes a generator `g` when `g^±1` is itself a relator.
pub(crate) fn eliminate_killed_generators(mut generators: Vec<String>, mut relators: Vec<Word>) -> GroupPresentation {
    loop {
        relators = relators.iter().map(Word::cyclic_reduce).filter(|r| !r.is_empty()).collect();
        let Some(killed) = relators.iter().find(|r| r.len() == 1).map(|r| r.letters()[0].gen()) else {
            break;
        };
        generators.remove(killed);
        relators = relators
            .iter()
            .map(|r| {
                Word::from_letters(r.letters().iter().filter(|l| l.gen() != killed).map(|&l| {
                    if l.gen() > killed {
                        Letter { generator: l.generator - 1, inverse: l.inverse }
                    } else {
                        l
                    }
                }))
            })
            .collect();
    }
    GroupPresentation::new(generators, relators).expect("rewritten relators use declared generators")
}

/// Presentation of π₁(L) with one extra relator per loop of Ω (no
/// simplification, so certificates refer to exactly this presentation).
pub fn pi1_with_discs(complex: &FlagComplex, omega: &OmegaSet) -> Result<GroupPresentation> {
    let chords = ChordPresentation::build(complex, 0)?;
    let mut relators = chords.triangle_relators(complex);
    relators.extend(omega.loops.iter().map(|l| chords.rewrite(l.edges())));
    GroupPresentation::new(chords.generators, relators)
}

/// Whether attaching discs along Ω makes L simply connected.
///
/// Proved comes with a coset table of index one for π₁ with the Ω relators
/// added; Refuted with a finite permutation quotient in which some generator
/// survives.
pub fn normally_generates(complex: &FlagComplex, omega: &OmegaSet, budget: &Budget) -> Result<Claim> {
    for l in &omega.loops {
        EdgeLoop::from_edges(complex, l.edges().to_vec())?;
    }
    let presentation = pi1_with_discs(complex, omega)?;
    let verdict = word_engine::is_group_trivial(&presentation, budget);
    Ok(Claim { presentation, subject: Subject::WholeGroup, verdict })
}

/// Convenience wrapper reporting only the status.
pub fn normally_generates_status(complex: &FlagComplex, omega: &OmegaSet, budget: &Budget) -> Result<TriState> {
    Ok(normally_generates(complex, omega, budget)?.verdict)
}

/// Standard small complexes used throughout tests and examples.
pub mod samples {
    use super::*;

    pub fn cycle(n: usize) -> FlagComplex {
        flag_completion(&SimpleGraph::cycle(n))
    }

    pub fn simplex(dim: usize) -> FlagComplex {
        flag_completion(&SimpleGraph::complete(dim + 1))
    }

    /// Boundary of the octahedron: the flag triangulation of the 2-sphere.
    pub fn octahedron() -> FlagComplex {
        let mut pairs = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                if j != i + 3 {
                    pairs.push((i, j));
                }
            }
        }
        flag_completion(&SimpleGraph::numbered(6, &pairs).unwrap())
    }

    pub fn complete_bipartite(a: usize, b: usize) -> FlagComplex {
        let mut pairs = Vec::new();
        for i in 0..a {
            for j in 0..b {
                pairs.push((i, a + j));
            }
        }
        flag_completion(&SimpleGraph::numbered(a + b, &pairs).unwrap())
    }

    /// The boundary loop `0 → 1 → ... → n-1 → 0` of an n-cycle.
    pub fn boundary_loop(complex: &FlagComplex, n: usize) -> EdgeLoop {
        EdgeLoop::from_vertex_cycle(complex, &(0..n).collect::<Vec<_>>()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use crate::word_engine::Status;

    #[test]
    fn completion_examples() {
        let tri = cycle(3);
        assert_eq!(tri.dimension(), Some(2));
        assert_eq!(tri.simplices_of_dim(2).len(), 1);
        let sq = cycle(4);
        assert_eq!(sq.dimension(), Some(1));
        assert!(sq.simplices_of_dim(2).is_empty());
        assert_eq!(simplex(3).dimension(), Some(3));
        assert_eq!(simplex(3).census(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn completion_is_idempotent() {
        let c = octahedron();
        let again = flag_completion(c.graph());
        assert_eq!(again, c);
        assert_eq!(again.simplices(), c.simplices());
    }

    #[test]
    fn homology_examples() {
        let h = reduced_homology(&cycle(4), 1).unwrap();
        assert_eq!(h, HomologyGroup { rank: 1, torsion: vec![] });
        assert!(reduced_homology(&cycle(4), 0).unwrap().is_trivial());
        let tri = simplex(2);
        for k in 0..=2 {
            assert!(reduced_homology(&tri, k).unwrap().is_trivial());
        }
        assert!(is_acyclic(&tri));
        let oct = octahedron();
        assert_eq!(reduced_homology(&oct, 2).unwrap().rank, 1);
        assert!(reduced_homology(&oct, 1).unwrap().is_trivial());
        assert!(matches!(reduced_homology(&cycle(4), 2), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn pi1_examples() {
        let p = pi1_presentation(&cycle(4), 0).unwrap();
        assert_eq!((p.generator_count(), p.relators().len()), (1, 0));
        let p = pi1_presentation(&simplex(2), 0).unwrap();
        assert_eq!((p.generator_count(), p.relators().len()), (0, 0));
        let p = pi1_presentation(&complete_bipartite(3, 3), 0).unwrap();
        assert_eq!((p.generator_count(), p.relators().len()), (4, 0));
        let disconnected = flag_completion(&SimpleGraph::numbered(2, &[]).unwrap());
        assert_eq!(pi1_presentation(&disconnected, 0).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn normal_generation_examples() {
        let sq = cycle(4);
        let boundary = boundary_loop(&sq, 4);
        let budget = Budget::default();
        let proved = normally_generates(&sq, &OmegaSet::new(vec![boundary.clone()]), &budget).unwrap();
        assert_eq!(proved.verdict.status, Status::Proved);
        let empty = normally_generates(&sq, &OmegaSet::default(), &budget).unwrap();
        assert_eq!(empty.verdict.status, Status::Refuted);
        let twice = normally_generates(&sq, &OmegaSet::new(vec![boundary.repeated(2)]), &budget).unwrap();
        assert_eq!(twice.verdict.status, Status::Refuted);
        for claim in [proved, empty, twice] {
            word_engine::verify_claim(&claim).unwrap();
        }
    }

    #[test]
    fn loops_are_validated() {
        let sq = cycle(4);
        assert!(EdgeLoop::from_vertex_cycle(&sq, &[0, 2, 3]).is_err());
        assert!(EdgeLoop::from_vertex_cycle(&sq, &[0, 1]).is_err());
        let omega = OmegaSet::from_json(&sq, r#"{"loops":[[0,1,2,3]]}"#).unwrap();
        assert_eq!(omega.loops[0].len(), 4);
        let bare = OmegaSet::from_json(&sq, r#"[["0","1","2","3"]]"#).unwrap();
        assert_eq!(bare, omega);
    }
}
