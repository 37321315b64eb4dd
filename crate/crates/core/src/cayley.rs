//! Finite balls in simplicial Cayley graphs, closed loops and distances.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::oracle::WordOracle;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallVertex {
    pub id: usize,
    pub word: Word,
    pub dist: usize,
}

/// The ball of radius `radius` about the identity. Vertex 0 is the center.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub generators: Vec<String>,
    pub radius: usize,
    pub oracle_tag: String,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<(usize, usize)>,
    /// `step[v][l]` is the vertex reached from `v` by letter index `l`, if it
    /// lies in the ball.
    step: Vec<Vec<Option<usize>>>,
    adjacency: Vec<Vec<usize>>,
}

enum Lookup {
    Keys(HashMap<Vec<i64>, usize>),
    Buckets(HashMap<Vec<i64>, Vec<usize>>),
}

/// Breadth-first construction of a ball. Two words give the same vertex
/// exactly when the oracle says so; any inconclusive comparison aborts.
pub fn build_ball(oracle: &dyn WordOracle, radius: usize) -> Result<CayleyBall> {
    let letters = 2 * oracle.generators().len();
    let root = Word::empty();
    let mut lookup = match oracle.key(&root)? {
        Some(k) => Lookup::Keys(HashMap::from([(k, 0)])),
        None => Lookup::Buckets(HashMap::from([(oracle.bucket(&root), vec![0])])),
    };
    let mut vertices = vec![BallVertex { id: 0, word: root, dist: 0 }];
    let mut step: Vec<Vec<Option<usize>>> = vec![vec![None; letters]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for l in 0..letters {
            let mut w = vertices[v].word.clone();
            w.push(Letter::from_index(l));
            let found = match &mut lookup {
                Lookup::Keys(map) => {
                    let k = oracle.key(&w)?.ok_or_else(|| Error::OracleInsufficient("oracle lost its keys".into()))?;
                    match map.get(&k) {
                        Some(&u) => Ok(u),
                        None => Err(Some(k)),
                    }
                }
                Lookup::Buckets(map) => {
                    let b = oracle.bucket(&w);
                    let mut hit = None;
                    for &u in map.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
                        if oracle.is_identity(&w.concat(&vertices[u].word.inverse()))? {
                            hit = Some(u);
                            break;
                        }
                    }
                    hit.ok_or(None)
                }
            };
            let target = match found {
                Ok(u) => Some(u),
                Err(_) if vertices[v].dist == radius => None,
                Err(k) => {
                    let id = vertices.len();
                    match (&mut lookup, k) {
                        (Lookup::Keys(map), Some(k)) => {
                            map.insert(k, id);
                        }
                        (Lookup::Buckets(map), _) => map.entry(oracle.bucket(&w)).or_default().push(id),
                        (Lookup::Keys(_), None) => unreachable!(),
                    }
                    vertices.push(BallVertex { id, word: w.free_reduce(), dist: vertices[v].dist + 1 });
                    step.push(vec![None; letters]);
                    queue.push_back(id);
                    Some(id)
                }
            };
            step[v][l] = target;
        }
    }
    let mut edge_set = BTreeSet::new();
    for (v, row) in step.iter().enumerate() {
        for &u in row.iter().flatten() {
            if u != v {
                edge_set.insert((v.min(u), v.max(u)));
            }
        }
    }
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for &(u, v) in &edge_set {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    Ok(CayleyBall {
        generators: oracle.generators().to_vec(),
        radius,
        oracle_tag: oracle.tag(),
        vertices,
        edges: edge_set.into_iter().collect(),
        step,
        adjacency,
    })
}

/// Closed loops at the center, labelled by words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopEnumeration {
    /// One word per loop up to rotation and reversal, in shortlex order.
    pub loops: Vec<Word>,
    /// False when `max_len` exceeds what the ball can see.
    pub conclusive: bool,
}

impl CayleyBall {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Least letter index moving `u` to `v`.
    pub fn edge_letter(&self, u: usize, v: usize) -> Option<Letter> {
        self.step[u].iter().position(|&t| t == Some(v)).map(Letter::from_index)
    }

    /// Nontrivial words of length one or two that are trivial in the group
    /// but not freely trivial: generators equal to the identity, and
    /// coincidences between generators.
    pub fn short_relations(&self) -> Vec<Word> {
        let mut out = BTreeSet::new();
        for (l, t) in self.step[0].iter().enumerate() {
            let a = Letter::from_index(l);
            match t {
                Some(0) => {
                    out.insert(Word(vec![a]).cyclic_canonical());
                }
                Some(u) => {
                    for (m, back) in self.step[*u].iter().enumerate() {
                        let b = Letter::from_index(m);
                        if *back == Some(0) && b != a.inv() {
                            out.insert(Word(vec![a, b]).cyclic_canonical());
                        }
                    }
                }
                None => {}
            }
        }
        out.into_iter().collect()
    }

    /// Non-backtracking closed edge paths at the center of length at most
    /// `max_len`, whose first and last edges also differ. Each edge carries
    /// its least letter.
    pub fn closed_loops(&self, max_len: usize) -> LoopEnumeration {
        let dist: Vec<usize> = self.vertices.iter().map(|v| v.dist).collect();
        let mut found = BTreeSet::new();
        let mut path = vec![0usize];
        self.extend_loops(&dist, max_len, &mut path, &mut found);
        LoopEnumeration { loops: found.into_iter().collect(), conclusive: max_len <= 2 * self.radius + 1 }
    }

    fn extend_loops(&self, dist: &[usize], max_len: usize, path: &mut Vec<usize>, found: &mut BTreeSet<Word>) {
        let len = path.len() - 1;
        let here = *path.last().unwrap();
        for &next in &self.adjacency[here] {
            if len >= 1 && next == path[len - 1] {
                continue;
            }
            if next == 0 {
                path.push(0);
                if len >= 2 && path[1] != here {
                    found.insert(self.path_word(path).cyclic_canonical());
                }
                // walks may pass through the center and carry on
                if len + 1 < max_len {
                    self.extend_loops(dist, max_len, path, found);
                }
                path.pop();
                continue;
            }
            if len + 1 + dist[next] > max_len {
                continue;
            }
            path.push(next);
            self.extend_loops(dist, max_len, path, found);
            path.pop();
        }
    }

    fn path_word(&self, path: &[usize]) -> Word {
        Word::from_letters(path.windows(2).map(|e| self.edge_letter(e[0], e[1]).expect("path edges exist")))
    }

    /// Breadth-first distance inside the ball.
    pub fn graph_distance(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.vertices.len();
        if u >= n || v >= n {
            return None;
        }
        let mut d = vec![usize::MAX; n];
        d[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                return Some(d[x]);
            }
            for &y in &self.adjacency[x] {
                if d[y] == usize::MAX {
                    d[y] = d[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// The underlying graph, vertices named by their ids.
    pub fn to_graph(&self) -> SimpleGraph {
        SimpleGraph::numbered(self.vertices.len(), &self.edges).expect("balls are simplicial")
    }

    /// Number of vertices at each distance from the center.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius + 1];
        for v in &self.vertices {
            out[v.dist] += 1;
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph ball {\n");
        for v in &self.vertices {
            let label = if v.word.is_empty() { "1".to_string() } else { format_word(&self.generators, &v.word) };
            writeln!(out, "  {} [label=\"{}\"];", v.id, label.replace('"', "\\\"")).unwrap();
        }
        for (u, v) in &self.edges {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "oracle": self.oracle_tag,
            "radius": self.radius,
            "generators": self.generators,
            "vertices": self.vertices.iter().map(|v| serde_json::json!({
                "id": v.id,
                "word": format_word(&self.generators, &v.word),
                "dist": v.dist,
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
        })
    }
}

fn format_word(generators: &[String], w: &Word) -> String {
    w.letters()
        .iter()
        .map(|l| if l.inverse { format!("{}^-1", generators[l.gen()]) } else { generators[l.gen()].clone() })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Non-backtracking closed walks of length 3..=`max_len` in a finite graph,
/// over all basepoints, as vertex sequences without the repeated endpoint.
/// Walks equal up to rotation or reversal are listed once.
pub fn graph_cycles(graph: &SimpleGraph, max_len: usize) -> Vec<Vec<usize>> {
    let mut found = BTreeSet::new();
    for base in 0..graph.vertex_count() {
        let dist: Vec<usize> = graph.distances_from(base).into_iter().map(|d| d.unwrap_or(usize::MAX)).collect();
        let mut path = vec![base];
        walk(graph, base, &dist, max_len, &mut path, &mut found);
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn walk(
    graph: &SimpleGraph,
    base: usize,
    dist: &[usize],
    max_len: usize,
    path: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<usize>>,
) {
    let len = path.len() - 1;
    let here = *path.last().unwrap();
    for &next in graph.neighbors(here) {
        // rotations starting at the least vertex cover every walk
        if next < base || (len >= 1 && next == path[len - 1]) {
            continue;
        }
        if next == base {
            if len >= 2 && path[1] != here {
                found.insert(canonical_cycle(path));
            }
            if len + 1 < max_len {
                path.push(base);
                walk(graph, base, dist, max_len, path, found);
                path.pop();
            }
            continue;
        }
        if len + 1 + dist[next] > max_len {
            continue;
        }
        path.push(next);
        walk(graph, base, dist, max_len, path, found);
        path.pop();
    }
}

fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    for reverse in [false, true] {
        for r in 0..n {
            let c: Vec<usize> =
                (0..n).map(|i| if reverse { cycle[(r + n - i) % n] } else { cycle[(r + i) % n] }).collect();
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::samples;
    use crate::oracle::{BbOracle, PresentationOracle};
    use crate::presentation::{build_racg, GroupPresentation};
    use crate::word_engine::Budget;

    fn cyclic(n: i64) -> PresentationOracle {
        let rel = if n == 0 { vec![] } else { vec![Word::power(0, n)] };
        PresentationOracle::new(GroupPresentation::new(vec!["a".into()], rel).unwrap(), Budget::default())
    }

    #[test]
    fn infinite_cyclic_ball_is_a_path() {
        let ball = build_ball(&cyclic(0), 3).unwrap();
        assert_eq!(ball.vertex_count(), 7);
        assert_eq!(ball.edges.len(), 6);
        let ends: Vec<usize> = ball.vertices.iter().filter(|v| v.dist == 3).map(|v| v.id).collect();
        assert_eq!(ball.graph_distance(ends[0], ends[1]), Some(6));
        assert_eq!(ball.graph_distance(0, 0), Some(0));
        assert!(ball.closed_loops(6).loops.is_empty());
    }

    #[test]
    fn racg_on_an_edge_has_four_elements() {
        let g = SimpleGraph::numbered(2, &[(0, 1)]).unwrap();
        let ball = build_ball(&PresentationOracle::new(build_racg(&g), Budget::default()), 2).unwrap();
        assert_eq!(ball.vertex_count(), 4);
        // involutions give single edges, so the ball is a 4-cycle
        assert_eq!(ball.edges.len(), 4);
        let loops = ball.closed_loops(4);
        assert_eq!(loops.loops.len(), 1);
        assert_eq!(loops.loops[0].len(), 4);
        assert_eq!(ball.short_relations().len(), 2);
    }

    #[test]
    fn bb_of_an_edge_is_a_line() {
        let o = BbOracle::new(samples::simplex(1), &Budget::default()).unwrap();
        for r in 1..4 {
            let ball = build_ball(&o, r).unwrap();
            assert_eq!(ball.vertex_count(), 2 * r + 1);
            assert_eq!(ball.edges.len(), 2 * r);
        }
    }

    #[test]
    fn word_length_matches_distance() {
        let g = SimpleGraph::cycle(5);
        let ball = build_ball(&PresentationOracle::new(build_racg(&g), Budget::default()), 3).unwrap();
        for v in &ball.vertices {
            assert_eq!(v.word.len(), v.dist);
            assert_eq!(ball.graph_distance(0, v.id), Some(v.dist));
        }
    }

    #[test]
    fn finite_graph_cycles() {
        assert_eq!(graph_cycles(&SimpleGraph::cycle(4), 4), vec![vec![0, 1, 2, 3]]);
        assert!(graph_cycles(&SimpleGraph::path(5), 10).is_empty());
        let k4 = graph_cycles(&SimpleGraph::complete(4), 3);
        assert_eq!(k4.len(), 4);
        // going round twice is a separate non-backtracking walk
        assert_eq!(graph_cycles(&SimpleGraph::cycle(3), 6).len(), 2);
    }

    #[test]
    fn exports() {
        let ball = build_ball(&cyclic(3), 1).unwrap();
        assert_eq!(ball.vertex_count(), 3);
        assert!(ball.to_dot().contains("0 -- 1"));
        let json = ball.to_json();
        assert_eq!(json["vertices"].as_array().unwrap().len(), 3);
        assert_eq!(json["edges"].as_array().unwrap().len(), 3);
    }
}
