//! Exact maximum subgraph density.
//!
//! Small graphs are enumerated exhaustively. Larger ones use Dinkelbach
//! iteration over the density guess, where each step finds a subset
//! maximizing `|E(S)| - g|S|` as a minimum cut in the edge/vertex closure
//! network. All guesses are exact rationals scaled to integer capacities.

use std::collections::VecDeque;

use serde::Serialize;

use super::Graph;
use crate::rational::Rational;

/// Graphs with at most this many vertices are enumerated exhaustively.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sparsity {
    /// `max(1, density)`.
    pub omega: Rational,
    /// Maximum of `|E(G[S])| / |S|` over non-empty `S` (0 for the empty graph).
    pub density: Rational,
    /// Vertex indices of a subset attaining `density`.
    pub witness: Option<Vec<usize>>,
}

pub fn compute_sparsity(g: &Graph) -> Sparsity {
    let (density, witness) = if g.vertex_count() <= BRUTE_FORCE_LIMIT {
        max_density_brute(g)
    } else {
        max_density_flow(g)
    };
    Sparsity {
        omega: density.clone().max(Rational::one()),
        density,
        witness,
    }
}

/// Exhaustive search; the witness is the first maximizer in bitmask order.
pub fn max_density_brute(g: &Graph) -> (Rational, Option<Vec<usize>>) {
    let n = g.vertex_count();
    assert!(
        n <= 26,
        "exhaustive density search is limited to 26 vertices"
    );
    if n == 0 {
        return (Rational::zero(), None);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();
    let (mut best_e, mut best_s, mut best_mask) = (0u64, 1u64, 1u32);
    for mask in 1u32..(1u32 << n) {
        let mut twice = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            twice += (adj[v] & mask).count_ones();
        }
        let e = (twice / 2) as u64;
        let s = mask.count_ones() as u64;
        if e * best_s > best_e * s {
            best_e = e;
            best_s = s;
            best_mask = mask;
        }
    }
    let witness = (0..n).filter(|&v| best_mask & (1 << v) != 0).collect();
    (Rational::new(best_e as i64, best_s as i64), Some(witness))
}

/// Parametric min-cut search; exact for any size.
pub fn max_density_flow(g: &Graph) -> (Rational, Option<Vec<usize>>) {
    let n = g.vertex_count();
    if n == 0 {
        return (Rational::zero(), None);
    }
    if g.edge_count() == 0 {
        return (Rational::zero(), Some(vec![0]));
    }
    let mut set: Vec<usize> = (0..n).collect();
    let mut guess = Rational::new(g.edge_count() as i64, n as i64);
    loop {
        match best_excess_subset(g, &guess) {
            Some(better) => {
                let mask = mask_of(n, &better);
                let e = g.induced_edge_count(&mask);
                let next = Rational::new(e as i64, better.len() as i64);
                debug_assert!(next > guess);
                guess = next;
                set = better;
            }
            None => return (guess, Some(set)),
        }
    }
}

/// Returns a subset whose density strictly exceeds `omega`, if any exists.
pub fn density_exceeds(g: &Graph, omega: &Rational) -> Option<Vec<usize>> {
    assert!(
        !omega.is_negative(),
        "density threshold must be non-negative"
    );
    if g.edge_count() == 0 {
        return None;
    }
    best_excess_subset(g, omega)
}

fn mask_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

/// The minimal subset maximizing `|E(S)| - g|S|`, provided that maximum is
/// strictly positive. `g` must be non-negative.
fn best_excess_subset(g: &Graph, guess: &Rational) -> Option<Vec<usize>> {
    let p = i64::try_from(guess.numer()).expect("density numerator fits i64");
    let q = i64::try_from(guess.denom()).expect("density denominator fits i64");
    let (n, m) = (g.vertex_count(), g.edge_count());
    // Nodes: 0 = source, 1 = sink, 2..2+m edges, 2+m.. vertices.
    let source = 0;
    let sink = 1;
    let edge_node = |id: usize| 2 + id;
    let vertex_node = |v: usize| 2 + m + v;
    let infinite = q.saturating_mul(m as i64 + 1).saturating_add(1);
    let mut net = Dinic::new(2 + m + n);
    for (id, e) in g.edges().iter().enumerate() {
        net.add_edge(source, edge_node(id), q);
        net.add_edge(edge_node(id), vertex_node(e.0), infinite);
        net.add_edge(edge_node(id), vertex_node(e.1), infinite);
    }
    for v in 0..n {
        net.add_edge(vertex_node(v), sink, p);
    }
    let cut = net.max_flow(source, sink);
    if (m as i64) * q - cut <= 0 {
        return None;
    }
    let reach = net.residual_reachable(source);
    let set: Vec<usize> = (0..n).filter(|&v| reach[vertex_node(v)]).collect();
    Some(set)
}

struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, a: usize, b: usize, c: i64) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.head[v] {
                let u = self.to[a];
                if self.cap[a] > 0 && self.level[u] < 0 {
                    self.level[u] = self.level[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.head[v].len() {
            let a = self.head[v][self.iter[v]];
            let u = self.to[a];
            if self.cap[a] > 0 && self.level[v] < self.level[u] {
                let d = self.dfs(u, t, f.min(self.cap[a]));
                if d > 0 {
                    self.cap[a] -= d;
                    self.cap[a ^ 1] += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    fn residual_reachable(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}
