//! Brute-force ground truth and instance generators.
//!
//! Nothing here is used by the main pipeline. Every routine is written
//! against the raw definitions so it can serve as an independent check.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bargain::BalancedOutcome;
use crate::blockset::GbsInstance;
use crate::error::{Error, Result};
use crate::graph::{density_exceeds, EdgeId, Graph};
use crate::lp::{self, check_certificates, LpProblem, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// Largest `e1` size accepted by [`brute_min_gbs`].
pub const MAX_BRUTE_EDGES: usize = 20;
/// Largest edge count accepted by [`brute_max_matching`].
pub const MAX_MATCHING_EDGES: usize = 22;
/// Sampling attempts before [`gen_sparse`] gives up.
pub const SPARSE_RETRIES: usize = 200;

/// The integrality-gap family: `n` vertices `X`, `2n` vertices `Y`, four
/// private leaves per `Y` vertex, all `X`–`Y` edges fixed, budget `2n - 1`.
#[derive(Debug, Clone)]
pub struct GapInstance {
    pub n: usize,
    pub instance: GbsInstance,
    pub x_set: Vec<usize>,
    pub y_set: Vec<usize>,
    pub o_set: Vec<usize>,
}

impl GapInstance {
    /// `x = 1/n` on `X`, `1 - 1/n` on `Y`, `0` on `O`, `z = 1/n` on every
    /// blockable edge, ordered as the relaxation's columns.
    pub fn fractional_solution(&self) -> (Vec<Rational>, Vec<Rational>) {
        let g = &self.instance.graph;
        let a = Rational::new(1, self.n as i64);
        let mut x = vec![Rational::zero(); g.vertex_count()];
        for &v in &self.x_set {
            x[v] = a.clone();
        }
        for &v in &self.y_set {
            x[v] = Rational::one() - &a;
        }
        let z = vec![a; self.instance.e1.len()];
        (x, z)
    }

    pub fn to_text(&self) -> String {
        self.instance.to_text()
    }
}

pub fn gen_gap(n: usize) -> Result<GapInstance> {
    if n == 0 {
        return Err(Error::precondition("gap instance needs n >= 1"));
    }
    let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=2 * n).map(|j| format!("y{j}")).collect();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut leaves = Vec::new();
    for y in &ys {
        for x in &xs {
            edges.push((x.clone(), y.clone()));
        }
        for k in 1..=4 {
            let o = format!("o_{y}_{k}");
            edges.push((y.clone(), o.clone()));
            leaves.push(o);
        }
    }
    let graph = Graph::new(
        Vec::<&str>::new(),
        edges.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )?;
    let idx = |names: &[String]| -> Vec<usize> {
        names.iter().map(|s| graph.index_of(s).unwrap()).collect()
    };
    let (x_set, y_set, o_set) = (idx(&xs), idx(&ys), idx(&leaves));
    let is_x = |v: usize| x_set.contains(&v);
    let (mut e1, mut e2) = (BTreeSet::new(), BTreeSet::new());
    for (id, e) in graph.edges().iter().enumerate() {
        if is_x(e.0) || is_x(e.1) {
            e2.insert(id);
        } else {
            e1.insert(id);
        }
    }
    let instance = GbsInstance::new(graph, e1, e2, 2 * n - 1)?;
    Ok(GapInstance {
        n,
        instance,
        x_set,
        y_set,
        o_set,
    })
}

/// Random graph on `n` vertices whose every induced subgraph has at most
/// `omega` edges per vertex. Between half of and all of `floor(omega * n)`
/// edges are drawn.
pub fn gen_sparse(n: usize, omega: &Rational, seed: u64) -> Result<Graph> {
    gen_sparse_bounded(n, omega, usize::MAX, seed)
}

/// Like [`gen_sparse`] with an additional cap on the edge count.
pub fn gen_sparse_bounded(
    n: usize,
    omega: &Rational,
    max_edges: usize,
    seed: u64,
) -> Result<Graph> {
    if n == 0 {
        return Err(Error::precondition("sparse graph needs n >= 1"));
    }
    if !omega.is_positive() {
        return Err(Error::precondition("sparsity target must be positive"));
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((a, b));
        }
    }
    let density_cap = (omega * &Rational::from(n as i64)).floor_i64().max(0) as usize;
    let cap = max_edges.min(pairs.len()).min(density_cap);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SPARSE_RETRIES {
        let m = if cap == 0 {
            0
        } else {
            rng.gen_range(cap.div_ceil(2)..=cap)
        };
        let mut chosen = pairs.clone();
        chosen.shuffle(&mut rng);
        chosen.truncate(m);
        let g = Graph::new(
            names.iter().map(String::as_str),
            chosen
                .iter()
                .map(|&(a, b)| (names[a].as_str(), names[b].as_str())),
        )?;
        if density_exceeds(&g, omega).is_none() {
            return Ok(g);
        }
    }
    Err(Error::precondition(format!(
        "no graph with sparsity {omega} found on {n} vertices after {SPARSE_RETRIES} attempts"
    )))
}

#[derive(Debug, Clone)]
pub struct BruteBlockingSet {
    /// Smallest blocking set (lexicographic among equals) and its witness.
    pub best: Option<(BTreeSet<EdgeId>, Vec<Rational>)>,
    /// True when no blocking set of size at most `max_size` exists.
    pub size_bound_hit: bool,
    pub candidates_checked: usize,
}

/// Feasibility LP: is there `x >= 0` with total at most `nu` covering every
/// active edge outside `blocked`? Returns a witness when there is.
pub fn cover_witness(
    inst: &GbsInstance,
    blocked: &BTreeSet<EdgeId>,
) -> Result<Option<Vec<Rational>>> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let mut p = LpProblem::new(Sense::Minimize);
    for v in 0..n {
        p.add_nonneg(format!("x_{}", g.name(v)));
    }
    for id in inst.edges() {
        if blocked.contains(&id) {
            continue;
        }
        let e = g.edge(id);
        p.add_constraint(
            format!("cover_{id}"),
            vec![(e.0, Rational::one()), (e.1, Rational::one())],
            Relation::Ge,
            Rational::one(),
        );
    }
    p.add_constraint(
        "budget",
        (0..n).map(|v| (v, Rational::one())).collect(),
        Relation::Le,
        Rational::from(inst.nu as i64),
    );
    let sol = lp::solve(&p);
    let issues = check_certificates(&p, &sol);
    if !issues.is_empty() {
        return Err(Error::invariant(format!(
            "feasibility LP certificate: {}",
            issues.join("; ")
        )));
    }
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.values)),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::invariant("feasibility LP reported unbounded")),
    }
}

/// Twice the fractional vertex cover number of the edges `keep`: the
/// maximum matching of the bipartite double cover, by augmenting paths.
fn double_cover_matching(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        right: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if right[v].is_none_or(|w| augment(w, adj, seen, right)) {
                right[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut right = vec![None; n];
    (0..n)
        .filter(|&u| augment(u, &adj, &mut vec![false; n], &mut right))
        .count()
}

/// Exact minimum generalized blocking set: the smallest `B ⊆ e1` such that
/// the `e2` edges and `e1 \ B` can be covered within the budget.
///
/// Candidates are decided by the fractional cover number; with
/// `cross_check` every decision is also confirmed by the exact LP.
pub fn brute_min_gbs(
    inst: &GbsInstance,
    max_size: usize,
    cross_check: bool,
) -> Result<BruteBlockingSet> {
    let e1: Vec<EdgeId> = inst.e1.iter().copied().collect();
    if e1.len() > MAX_BRUTE_EDGES {
        return Err(Error::precondition(format!(
            "{} blockable edges exceed the enumeration bound {MAX_BRUTE_EDGES}",
            e1.len()
        )));
    }
    let g = &inst.graph;
    let n = g.vertex_count();
    let decide = |b: &BTreeSet<EdgeId>| -> Result<bool> {
        let keep: Vec<(usize, usize)> = inst
            .edges()
            .into_iter()
            .filter(|id| !b.contains(id))
            .map(|id| {
                let e = g.edge(id);
                (e.0, e.1)
            })
            .collect();
        let feasible = double_cover_matching(n, &keep) <= 2 * inst.nu;
        if cross_check {
            let lp_feasible = cover_witness(inst, b)?.is_some();
            if lp_feasible != feasible {
                return Err(Error::invariant(format!(
                    "cover number and LP disagree on {b:?}"
                )));
            }
        }
        Ok(feasible)
    };
    let mut checked = 0;
    for k in 0..=max_size.min(e1.len()) {
        let subsets: Vec<Vec<usize>> = (0..e1.len()).combinations(k).collect();
        checked += subsets.len();
        let found = subsets
            .par_iter()
            .map(|pick| {
                let b: BTreeSet<EdgeId> = pick.iter().map(|&i| e1[i]).collect();
                decide(&b).map(|ok| ok.then_some(b))
            })
            .find_first(|r| !matches!(r, Ok(None)));
        match found {
            Some(Ok(Some(b))) => {
                let x = cover_witness(inst, &b)?
                    .ok_or_else(|| Error::invariant("optimum has no cover witness"))?;
                return Ok(BruteBlockingSet {
                    best: Some((b, x)),
                    size_bound_hit: false,
                    candidates_checked: checked,
                });
            }
            Some(Err(e)) => return Err(e),
            _ => {}
        }
    }
    Ok(BruteBlockingSet {
        best: None,
        size_bound_hit: true,
        candidates_checked: checked,
    })
}

/// Minimum blocking set of `g` under budget `nu`, every edge blockable.
pub fn brute_min_blocking_set(g: &Graph, nu: usize, max_size: usize) -> Result<BruteBlockingSet> {
    let inst = GbsInstance::new(
        g.clone(),
        (0..g.edge_count()).collect(),
        BTreeSet::new(),
        nu,
    )?;
    brute_min_gbs(&inst, max_size, true)
}

/// Maximum matching size by exhaustive search.
pub fn brute_max_matching(g: &Graph) -> Result<usize> {
    if g.edge_count() > MAX_MATCHING_EDGES {
        return Err(Error::precondition(format!(
            "{} edges exceed the enumeration bound {MAX_MATCHING_EDGES}",
            g.edge_count()
        )));
    }
    fn go(edges: &[(usize, usize)], used: &mut [bool], size: usize, best: &mut usize) {
        if size + edges.len() <= *best {
            return;
        }
        let Some((&(a, b), rest)) = edges.split_first() else {
            *best = size;
            return;
        };
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            go(rest, used, size + 1, best);
            used[a] = false;
            used[b] = false;
        }
        go(rest, used, size, best);
    }
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.0, e.1)).collect();
    let mut best = 0;
    go(&edges, &mut vec![false; g.vertex_count()], 0, &mut best);
    Ok(best)
}

/// Re-checks (S1)–(S3) of a balanced outcome on `g` with `blocked` removed.
/// Returns one message per violation.
pub fn verify_outcome(
    g: &Graph,
    blocked: &BTreeSet<EdgeId>,
    nu: usize,
    out: &BalancedOutcome,
) -> Vec<String> {
    let rest = g.without_edges(blocked);
    let labels = |h: &Graph| {
        h.edges()
            .iter()
            .map(|e| h.edge_label(e))
            .collect::<BTreeSet<_>>()
    };
    if labels(&rest) != labels(&out.graph) {
        return vec!["outcome graph is not the input minus the blocking set".to_string()];
    }
    verify_allocation(&rest, nu, &out.matching.edges, &out.allocation)
}

/// [`verify_outcome`] on raw parts: `matching` holds edge ids of `g`.
pub fn verify_allocation(g: &Graph, nu: usize, matching: &[EdgeId], x: &[Rational]) -> Vec<String> {
    let mut bad = Vec::new();
    let n = g.vertex_count();
    if x.len() != n {
        return vec![format!(
            "allocation has {} entries for {n} vertices",
            x.len()
        )];
    }
    let mut mate = vec![None; n];
    for &id in matching {
        let e = g.edge(id);
        if mate[e.0].is_some() || mate[e.1].is_some() {
            bad.push(format!(
                "edge {} shares an endpoint with another matching edge",
                g.edge_label(&e)
            ));
        }
        mate[e.0] = Some(e.1);
        mate[e.1] = Some(e.0);
    }
    let total: Rational = x.iter().sum();
    if total > Rational::from(nu as i64) {
        bad.push(format!("(S1) total {total} exceeds {nu}"));
    }
    for (v, xv) in x.iter().enumerate() {
        if xv.is_negative() {
            bad.push(format!("{} has negative payoff {xv}", g.name(v)));
        }
    }
    for e in g.edges() {
        if &x[e.0] + &x[e.1] < Rational::one() {
            bad.push(format!("(S2) fails on {}", g.edge_label(e)));
        }
    }
    // No floor at 0: a neighbour paid more than 1 gives a negative option.
    let alt = |i: usize| -> Rational {
        let mut best: Option<Rational> = None;
        for e in g.edges() {
            if !e.touches(i) {
                continue;
            }
            let j = e.other(i);
            if mate[i] == Some(j) {
                continue;
            }
            let v = Rational::one() - &x[j];
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        best.unwrap_or_else(Rational::zero)
    };
    for &id in matching {
        let e = g.edge(id);
        if &x[e.0] - alt(e.0) != &x[e.1] - alt(e.1) {
            bad.push(format!("(S3) fails on {}", g.edge_label(&e)));
        }
    }
    bad
}
