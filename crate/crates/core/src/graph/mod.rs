//! Undirected simple graphs over string-labelled vertices.
//!
//! Vertex indices follow the lexicographic order of the labels and edge
//! indices follow the lexicographic order of `(u, v)` index pairs with
//! `u < v`, so every traversal is deterministic.

mod double;
mod io;
mod sparsity;

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use double::{bipartite_double, pull_back, DoubledGraph};
pub use io::{annotations, parse_edge_list, GraphJson};
pub use sparsity::{
    compute_sparsity, density_exceeds, max_density_brute, max_density_flow, Sparsity,
};

/// Index of an edge in [`Graph::edges`].
pub type EdgeId = usize;

/// Endpoint indices with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    /// Per vertex: `(neighbour, edge id)` sorted by neighbour.
    adj: Vec<Vec<(usize, EdgeId)>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|e| self.edge_label(e)).collect();
        f.debug_struct("Graph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from labelled vertices and edges. Edge endpoints are
    /// added as vertices; duplicate edges collapse. Self-loops are rejected.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut names: BTreeSet<String> = vertices
            .into_iter()
            .map(|s| s.as_ref().to_string())
            .collect();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return Err(Error::input(0, format!("self-loop on `{a}`")));
            }
            names.insert(a.to_string());
            names.insert(b.to_string());
            pairs.push((a.to_string(), b.to_string()));
        }
        let names: Vec<String> = names.into_iter().collect();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let edges: BTreeSet<Edge> = pairs
            .iter()
            .map(|(a, b)| Edge::new(index[a], index[b]))
            .collect();
        Ok(Self::from_parts(names, index, edges.into_iter().collect()))
    }

    /// Builds a graph from index pairs over `names` (which must be sorted and unique).
    pub(crate) fn from_indexed(names: Vec<String>, edges: impl IntoIterator<Item = Edge>) -> Self {
        debug_assert!(names.windows(2).all(|w| w[0] < w[1]));
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        Self::from_parts(names, index, edges.into_iter().collect())
    }

    fn from_parts(names: Vec<String>, index: HashMap<String, usize>, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); names.len()];
        for (id, e) in edges.iter().enumerate() {
            adj[e.0].push((e.1, id));
            adj[e.1].push((e.0, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            names,
            index,
            edges,
            adj,
        }
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), HashMap::new(), Vec::new())
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

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    /// `(neighbour, edge id)` pairs in neighbour order.
    pub fn incident(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.adj[a]
            .binary_search_by_key(&b, |&(u, _)| u)
            .ok()
            .map(|pos| self.adj[a][pos].1)
    }

    pub fn edge_id_by_name(&self, a: &str, b: &str) -> Option<EdgeId> {
        self.edge_id(self.index_of(a)?, self.index_of(b)?)
    }

    pub fn edge_names(&self, id: EdgeId) -> (&str, &str) {
        let e = self.edges[id];
        (&self.names[e.0], &self.names[e.1])
    }

    pub fn edge_label(&self, e: &Edge) -> String {
        format!("{}-{}", self.names[e.0], self.names[e.1])
    }

    /// Same vertex set, keeping only edges with `keep(id)`.
    pub fn filter_edges(&self, mut keep: impl FnMut(EdgeId) -> bool) -> Graph {
        let edges: Vec<Edge> = (0..self.edges.len())
            .filter(|&id| keep(id))
            .map(|id| self.edges[id])
            .collect();
        Self::from_parts(self.names.clone(), self.index.clone(), edges)
    }

    /// Same vertex set without the listed edges.
    pub fn without_edges(&self, removed: &BTreeSet<EdgeId>) -> Graph {
        self.filter_edges(|id| !removed.contains(&id))
    }

    /// Number of edges with both endpoints in `subset` (a per-vertex mask).
    pub fn induced_edge_count(&self, subset: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| subset[e.0] && subset[e.1])
            .count()
    }

    /// A proper 2-colouring (`false`/`true` per vertex), or `None` if the
    /// graph has an odd cycle. Each component's smallest vertex gets `false`.
    pub fn is_bipartite(&self) -> Option<Vec<bool>> {
        let n = self.vertex_count();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                for u in self.neighbors(v) {
                    match color[u] {
                        None => {
                            color[u] = Some(!cv);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    /// Edge-list text: isolated vertices as single-token lines, then one
    /// `u v` line per edge, in canonical order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in 0..self.vertex_count() {
            if self.degree(v) == 0 {
                out.push_str(&self.names[v]);
                out.push('\n');
            }
        }
        for e in &self.edges {
            out.push_str(&self.names[e.0]);
            out.push(' ');
            out.push_str(&self.names[e.1]);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| [self.names[e.0].clone(), self.names[e.1].clone()])
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        Graph::new(
            json.vertices.iter().map(String::as_str),
            json.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())),
        )
    }

    /// Graphviz rendering; edges in `dashed` are drawn with `style=dashed`.
    pub fn to_dot(&self, dashed: &BTreeSet<EdgeId>) -> String {
        let mut out = String::from("graph G {\n");
        for name in &self.names {
            out.push_str(&format!("  \"{}\";\n", escape_dot(name)));
        }
        for (id, e) in self.edges.iter().enumerate() {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\"",
                escape_dot(&self.names[e.0]),
                escape_dot(&self.names[e.1])
            ));
            if dashed.contains(&id) {
                out.push_str(" [style=dashed]");
            }
            out.push_str(";\n");
        }
        out.push_str("}\n");
        out
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
