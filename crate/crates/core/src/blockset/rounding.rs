use std::collections::BTreeSet;

use super::extreme::{solve_gbs_lp, BadPartition, Classification, GoodCertificate};
use super::GbsInstance;
use crate::error::{ensure, Error, Result};
use crate::graph::EdgeId;
use crate::lp::{self, LpProblem, LpStatus, Relation, Sense};
use crate::rational::Rational;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IrStats {
    pub steps: usize,
    pub lp_solves: usize,
    pub case1: usize,
    pub case2: usize,
    pub case3: usize,
    pub bad_leaves: usize,
    pub cover_leaves: usize,
    pub empty_leaves: usize,
    /// Fractional budget-tight points whose two-value structure was verified.
    pub lemma2_checks: usize,
    /// Bad points whose full partition structure was verified.
    pub bad_checks: usize,
    /// Recursion levels at which I1–I3 were verified.
    pub invariant_checks: usize,
}

#[derive(Debug, Clone)]
pub struct IrOutcome {
    /// Indexed by ambient vertex.
    pub x_hat: Vec<Rational>,
    pub blocking_set: BTreeSet<EdgeId>,
    /// Relaxation optimum of the input instance.
    pub lp_value: Rational,
    pub trace: Vec<String>,
    pub stats: IrStats,
}

#[derive(Debug, Clone)]
enum Action {
    FixVertex(usize),
    Demote(EdgeId),
    Block(EdgeId),
}

struct Frame {
    e1: BTreeSet<EdgeId>,
    e2: BTreeSet<EdgeId>,
    nu: usize,
    lp_value: Rational,
    action: Action,
}

fn trace_line(step: usize, case: &str, inst: &GbsInstance) -> String {
    format!(
        "step={step} case={case} |V|={} |E1|={} |E2|={} nu={}",
        inst.vertices().len(),
        inst.e1.len(),
        inst.e2.len(),
        inst.nu
    )
}

/// Iterative rounding on a bipartite instance. `omega` must bound the
/// density of every induced subgraph of the active graph.
pub fn ir_solve(inst: &GbsInstance, omega: &Rational) -> Result<IrOutcome> {
    if !inst.is_bipartite() {
        return Err(Error::precondition(
            "iterative rounding needs a bipartite instance",
        ));
    }
    ensure!(
        *omega >= Rational::one(),
        "sparsity parameter {omega} is below 1"
    );
    let n = inst.graph.vertex_count();
    let mut stats = IrStats::default();
    let mut trace = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut cur = inst.clone();
    let mut root_value = None;

    let (leaf_x, leaf_b, leaf_value) = loop {
        stats.steps += 1;
        let step = stats.steps;
        if cur.edge_count() == 0 {
            stats.empty_leaves += 1;
            trace.push(trace_line(step, "leaf", &cur));
            break (vec![Rational::zero(); n], BTreeSet::new(), Rational::zero());
        }
        if cur.e1.is_empty() {
            stats.cover_leaves += 1;
            trace.push(trace_line(step, "leaf", &cur));
            let x = cover_leaf(&cur).map_err(|e| escalate(e, step))?;
            break (x, BTreeSet::new(), Rational::zero());
        }
        let ep = solve_gbs_lp(&cur).map_err(|e| escalate(e, step))?;
        stats.lp_solves += 1;
        if ep.lemma2_checked {
            stats.lemma2_checks += 1;
        }
        root_value.get_or_insert_with(|| ep.value.clone());
        let frame = |action: Action| Frame {
            e1: cur.e1.clone(),
            e2: cur.e2.clone(),
            nu: cur.nu,
            lp_value: ep.value.clone(),
            action,
        };
        match ep.classification {
            Classification::Good(GoodCertificate::UnitVertex(u)) => {
                trace.push(trace_line(step, "1", &cur));
                stats.case1 += 1;
                frames.push(frame(Action::FixVertex(u)));
                let g = &cur.graph;
                cur.e1.retain(|&id| !g.edge(id).touches(u));
                cur.e2.retain(|&id| !g.edge(id).touches(u));
                ensure!(cur.nu >= 1, "fixing a vertex with a zero budget");
                cur.nu -= 1;
            }
            Classification::Good(GoodCertificate::ZeroEdge(e)) => {
                trace.push(trace_line(step, "2", &cur));
                stats.case2 += 1;
                frames.push(frame(Action::Demote(e)));
                cur.e1.remove(&e);
                cur.e2.insert(e);
            }
            Classification::Good(GoodCertificate::HeavyEdge(e)) => {
                trace.push(trace_line(step, "3", &cur));
                stats.case3 += 1;
                frames.push(frame(Action::Block(e)));
                cur.e1.remove(&e);
            }
            Classification::Bad(part) => {
                trace.push(trace_line(step, "bad", &cur));
                stats.bad_leaves += 1;
                stats.bad_checks += 1;
                let (x, b) = bad_leaf_round(&cur, &part, &ep.value, omega)?;
                break (x, b, ep.value);
            }
            Classification::Covering => {
                unreachable!("instances without e1 edges end in a cover leaf")
            }
        }
    };

    let mut x_hat = leaf_x;
    let mut blocking = leaf_b;
    check_invariants(&cur, &leaf_value, omega, &x_hat, &blocking)?;
    stats.invariant_checks += 1;
    while let Some(f) = frames.pop() {
        match f.action {
            Action::FixVertex(u) => x_hat[u] = Rational::one(),
            Action::Demote(e) => debug_assert!(f.e1.contains(&e)),
            Action::Block(e) => {
                blocking.insert(e);
            }
        }
        let inst = GbsInstance {
            graph: cur.graph.clone(),
            e1: f.e1,
            e2: f.e2,
            nu: f.nu,
        };
        check_invariants(&inst, &f.lp_value, omega, &x_hat, &blocking)?;
        stats.invariant_checks += 1;
        cur = inst;
    }
    Ok(IrOutcome {
        x_hat,
        blocking_set: blocking,
        lp_value: root_value.unwrap_or_else(Rational::zero),
        trace,
        stats,
    })
}

/// Infeasibility below the root contradicts the projection argument.
fn escalate(e: Error, step: usize) -> Error {
    match e {
        Error::Precondition(msg) if step > 1 => {
            Error::invariant(format!("sub-instance infeasible: {msg}"))
        }
        other => other,
    }
}

/// Integral minimum vertex cover of the `e2` edges (no blockable edges remain).
fn cover_leaf(inst: &GbsInstance) -> Result<Vec<Rational>> {
    let g = &inst.graph;
    let verts = inst.vertices();
    let mut p = LpProblem::new(Sense::Minimize);
    let mut col = vec![usize::MAX; g.vertex_count()];
    for &v in &verts {
        col[v] = p.add_nonneg(format!("x_{}", g.name(v)));
        p.set_objective(col[v], Rational::one());
    }
    for &id in &inst.e2 {
        let e = g.edge(id);
        let (a, b) = g.edge_names(id);
        p.add_constraint(
            format!("e2_{a}_{b}"),
            vec![(col[e.0], Rational::one()), (col[e.1], Rational::one())],
            Relation::Ge,
            Rational::one(),
        );
    }
    let sol = lp::solve(&p);
    ensure!(sol.status == LpStatus::Optimal, "cover LP did not solve");
    if sol.objective > Rational::from(inst.nu as i64) {
        return Err(Error::precondition(format!(
            "the fixed edges need {} units but the budget is {}",
            sol.objective, inst.nu
        )));
    }
    let mut x = vec![Rational::zero(); g.vertex_count()];
    for &v in &verts {
        let val = &sol.values[col[v]];
        ensure!(
            val.is_integer(),
            "bipartite cover LP returned a fractional vertex"
        );
        x[v] = val.clone();
    }
    Ok(x)
}

/// Direct rounding of a bad extreme point: keep `nu` vertices of `Y` at 1,
/// drop the `|Y| - nu` with the fewest `e2` edges (smallest id on ties), and
/// block every edge at a dropped vertex.
pub fn bad_leaf_round(
    inst: &GbsInstance,
    part: &BadPartition,
    lp_value: &Rational,
    omega: &Rational,
) -> Result<(Vec<Rational>, BTreeSet<EdgeId>)> {
    let g = &inst.graph;
    let (nx, ny, nu) = (part.x_set.len(), part.y_set.len(), inst.nu);
    ensure!(
        nx + ny < 2 * nu && nu < ny,
        "bad leaf with |X| = {nx}, |Y| = {ny}, nu = {nu}"
    );
    let k = ny - nu;
    let dropped = greedy_drop(inst, &part.y_set, k);
    let removed_deg: usize = dropped.iter().map(|&(d, _)| d).sum();
    let removed: BTreeSet<usize> = dropped.into_iter().map(|(_, v)| v).collect();
    let two = Rational::from(2);
    ensure!(
        Rational::from(removed_deg as i64) <= &two * omega * Rational::from(k as i64),
        "dropped Y vertices have {removed_deg} fixed edges, above 2·{omega}·{k}"
    );

    let mut x = vec![Rational::zero(); g.vertex_count()];
    for &v in &part.y_set {
        if !removed.contains(&v) {
            x[v] = Rational::one();
        }
    }
    let blocked: BTreeSet<EdgeId> = inst
        .edges()
        .into_iter()
        .filter(|&id| {
            let e = g.edge(id);
            removed.contains(&e.0) || removed.contains(&e.1)
        })
        .collect();
    let total: Rational = x.iter().sum();
    ensure!(
        total == Rational::from(nu as i64),
        "bad leaf allocation totals {total}, not {nu}"
    );
    let cap = (&two * omega + Rational::one()) * lp_value;
    ensure!(
        Rational::from(blocked.len() as i64) <= cap,
        "bad leaf blocks {} edges, above {cap}",
        blocked.len()
    );
    Ok((x, blocked))
}

/// Picks `k` vertices of `y_set` by repeatedly taking one with the fewest
/// `e2` edges (smallest id on ties); returns `(e2 degree, vertex)` pairs.
/// `Y` is independent, so dropping a vertex leaves the others' degrees intact.
pub(crate) fn greedy_drop(inst: &GbsInstance, y_set: &[usize], k: usize) -> Vec<(usize, usize)> {
    let g = &inst.graph;
    let deg2 = |v: usize| inst.e2.iter().filter(|&&id| g.edge(id).touches(v)).count();
    let mut order: Vec<(usize, usize)> = y_set.iter().map(|&v| (deg2(v), v)).collect();
    order.sort_unstable();
    order.truncate(k);
    order
}

/// I1: every unblocked active edge is covered; I2: the total is within
/// budget; I3: the blocking set is within `(2ω+1)` times the relaxation value.
fn check_invariants(
    inst: &GbsInstance,
    lp_value: &Rational,
    omega: &Rational,
    x_hat: &[Rational],
    blocking: &BTreeSet<EdgeId>,
) -> Result<()> {
    let g = &inst.graph;
    let active = inst.edges();
    for &id in &active {
        if blocking.contains(&id) {
            continue;
        }
        let e = g.edge(id);
        ensure!(
            &x_hat[e.0] + &x_hat[e.1] >= Rational::one(),
            "I1 fails on {}",
            g.edge_label(&e)
        );
    }
    ensure!(
        blocking.iter().all(|id| active.binary_search(id).is_ok()),
        "blocking set leaves the instance"
    );
    let total: Rational = x_hat.iter().sum();
    ensure!(
        total <= Rational::from(inst.nu as i64),
        "I2 fails: total {total} > {}",
        inst.nu
    );
    let cap = (Rational::from(2) * omega + Rational::one()) * lp_value;
    ensure!(
        Rational::from(blocking.len() as i64) <= cap,
        "I3 fails: |B| = {} > {cap}",
        blocking.len()
    );
    Ok(())
}
