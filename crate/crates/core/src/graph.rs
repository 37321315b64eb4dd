//! Finite simple graphs with totally ordered, named vertices.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct SimpleGraph {
    names: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// JSON form `{vertices: [...], edges: [[u, v], ...]}`; vertex labels may be
/// strings or numbers.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<Value>,
    pub edges: Vec<[Value; 2]>,
}

impl TryFrom<GraphDoc> for SimpleGraph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        SimpleGraph::from_doc(&doc)
    }
}

impl From<SimpleGraph> for GraphDoc {
    fn from(g: SimpleGraph) -> Self {
        g.to_doc()
    }
}

fn label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Invalid(format!("vertex label {other} must be a string or number"))),
    }
}

impl SimpleGraph {
    /// Builds a graph, rejecting self-loops, repeated edges and unknown endpoints.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let index = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownVertex(s.to_string()));
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            pairs.push((index(u.as_ref())?, index(v.as_ref())?));
        }
        Self::from_indices(names, &pairs)
    }

    pub fn from_indices(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut edges = BTreeSet::new();
        for &(u, v) in pairs {
            if u >= n {
                return Err(Error::UnknownVertex(u.to_string()));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            if u == v {
                return Err(Error::SelfLoop(names[u].clone()));
            }
            let e = (u.min(v), u.max(v));
            if !edges.insert(e) {
                return Err(Error::MultiEdge(names[e.0].clone(), names[e.1].clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        Ok(SimpleGraph { names, edges, adjacency })
    }

    /// Vertices named `0..n`.
    pub fn numbered(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_indices((0..n).map(|i| i.to_string()).collect(), pairs)
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::numbered(n, &pairs).expect("cycle graphs need at least 3 vertices")
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Self::numbered(n, &pairs).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::numbered(n, &pairs).unwrap()
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        let vertices = doc.vertices.iter().map(label).collect::<Result<Vec<_>>>()?;
        let edges = doc.edges.iter().map(|[u, v]| Ok((label(u)?, label(v)?))).collect::<Result<Vec<_>>>()?;
        Self::new(&vertices, &edges)
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.names.iter().map(|n| Value::String(n.clone())).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| [Value::String(self.names[u].clone()), Value::String(self.names[v].clone())])
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("graph serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges as sorted `(low, high)` index pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Breadth-first distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Subgraph induced on `keep` (indices into this graph), in the given order.
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    pairs.push((i, j));
                }
            }
        }
        SimpleGraph::from_indices(names, &pairs).expect("induced subgraph of a simple graph is simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_multi_edges() {
        assert!(matches!(SimpleGraph::numbered(2, &[(0, 0)]), Err(Error::SelfLoop(_))));
        assert!(matches!(SimpleGraph::numbered(2, &[(0, 1), (1, 0)]), Err(Error::MultiEdge(..))));
        assert!(matches!(SimpleGraph::new(&["a"], &[("a", "b")]), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn json_accepts_numeric_labels() {
        let g = SimpleGraph::from_json(r#"{"vertices":[1,2,3],"edges":[[1,2],[2,3]]}"#).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.name(0), "1");
        let again = SimpleGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn distances_on_cycle() {
        let g = SimpleGraph::cycle(6);
        let d = g.distances_from(0);
        assert_eq!(d[3], Some(3));
        assert_eq!(d[5], Some(1));
        assert!(g.is_connected());
        let two = SimpleGraph::numbered(2, &[]).unwrap();
        assert!(!two.is_connected());
    }
}
