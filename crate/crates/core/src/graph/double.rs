use std::collections::BTreeSet;

use super::{Edge, EdgeId, Graph};
use crate::rational::Rational;

/// Two-copy bipartite cover of a graph.
///
/// Vertex `u` becomes `u_1` and `u_2`; edge `uv` becomes `u_1v_2` and `u_2v_1`.
#[derive(Debug, Clone)]
pub struct DoubledGraph {
    pub host: Graph,
    /// Original vertex index -> `(copy 1, copy 2)` host indices.
    pub side_map: Vec<(usize, usize)>,
    /// Original edge id -> the two host edge ids it maps to.
    pub edge_map: Vec<(EdgeId, EdgeId)>,
}

pub fn bipartite_double(g: &Graph) -> DoubledGraph {
    let n = g.vertex_count();
    let mut labelled: Vec<(String, usize, u8)> = (0..n)
        .flat_map(|v| {
            [
                (format!("{}_1", g.name(v)), v, 1u8),
                (format!("{}_2", g.name(v)), v, 2u8),
            ]
        })
        .collect();
    labelled.sort();
    let mut side_map = vec![(usize::MAX, usize::MAX); n];
    for (idx, (_, v, copy)) in labelled.iter().enumerate() {
        if *copy == 1 {
            side_map[*v].0 = idx;
        } else {
            side_map[*v].1 = idx;
        }
    }
    let names: Vec<String> = labelled.into_iter().map(|(s, _, _)| s).collect();
    let host_edges: Vec<Edge> = g
        .edges()
        .iter()
        .flat_map(|e| {
            [
                Edge::new(side_map[e.0].0, side_map[e.1].1),
                Edge::new(side_map[e.0].1, side_map[e.1].0),
            ]
        })
        .collect();
    let host = Graph::from_indexed(names, host_edges);
    let edge_map = g
        .edges()
        .iter()
        .map(|e| {
            let a = host
                .edge_id(side_map[e.0].0, side_map[e.1].1)
                .expect("copy edge present");
            let b = host
                .edge_id(side_map[e.0].1, side_map[e.1].0)
                .expect("copy edge present");
            (a, b)
        })
        .collect();
    DoubledGraph {
        host,
        side_map,
        edge_map,
    }
}

/// Maps a host solution back to the original graph: each vertex gets the
/// average of its two copies, and an edge is blocked when either copy is.
pub fn pull_back(
    d: &DoubledGraph,
    x_host: &[Rational],
    b_host: &BTreeSet<EdgeId>,
) -> (Vec<Rational>, BTreeSet<EdgeId>) {
    let half = Rational::new(1, 2);
    let x = d
        .side_map
        .iter()
        .map(|&(a, b)| (&x_host[a] + &x_host[b]) * &half)
        .collect();
    let blocked = d
        .edge_map
        .iter()
        .enumerate()
        .filter(|(_, (a, b))| b_host.contains(a) || b_host.contains(b))
        .map(|(id, _)| id)
        .collect();
    (x, blocked)
}
