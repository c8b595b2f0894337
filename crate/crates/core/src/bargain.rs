//! Balanced allocations on a stabilized graph.
//!
//! Starting from a stable allocation, [`prekernel`] equalizes every pair of
//! surpluses `s_ij = s_ji` on the remaining edges. It alternates between an
//! LP that pushes the frontier of balanced pairs outwards and Maschler local
//! shifts that lower the largest violated surplus. [`balanced_outcome`]
//! wraps this into the final matching, allocation and balance report.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use crate::blockset::BlockingSetResult;
use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::lp::{self, LpProblem, LpStatus, Relation, Sense};
use crate::matching::{matching_number, max_matching, Matching};
use crate::rational::Rational;

/// The outside option defining a surplus: an edge `ik`, or `i` alone when
/// `i` has no other neighbour (value `-x_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Edge { id: EdgeId, other: usize },
    Alone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSurplus {
    pub surplus: Rational,
    pub term: Term,
}

#[derive(Debug, Clone)]
pub struct SurplusState {
    pub x: Vec<Rational>,
    /// Keyed by ordered adjacent pair `(i, j)`.
    pub pairs: BTreeMap<(usize, usize), PairSurplus>,
    /// First violated pair `(i, j)` with `s_ij > s_ji` in the sorted list.
    pub violated: Option<(usize, usize)>,
    /// Largest surplus of a violated pair.
    pub s_max: Option<Rational>,
    /// Smallest surplus among edges in `s_set`, or 0.
    pub delta_cap: Rational,
    /// Edges whose surplus exceeds `s_max` (all balanced).
    pub s_set: BTreeSet<EdgeId>,
    /// Edges whose larger surplus equals `s_max`.
    pub i_set: BTreeSet<EdgeId>,
}

impl SurplusState {
    pub fn surplus(&self, i: usize, j: usize) -> &Rational {
        &self.pairs[&(i, j)].surplus
    }

    pub fn is_balanced(&self) -> bool {
        self.violated.is_none()
    }

    /// `max |s_ij - s_ji|` over edges.
    pub fn max_imbalance(&self) -> Rational {
        self.pairs
            .iter()
            .filter(|((i, j), _)| i < j)
            .map(|(&(i, j), p)| (&p.surplus - self.surplus(j, i)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn term_value(x: &[Rational], i: usize, term: &Term) -> Rational {
    match term {
        Term::Edge { other, .. } => Rational::one() - &x[i] - &x[*other],
        Term::Alone => -x[i].clone(),
    }
}

/// All directed surpluses of `x` on `g` and the derived frontier sets.
pub fn surpluses(g: &Graph, x: &[Rational]) -> SurplusState {
    let mut pairs = BTreeMap::new();
    for e in g.edges() {
        for (i, j) in [(e.0, e.1), (e.1, e.0)] {
            let mut best: Option<PairSurplus> = None;
            for &(k, id) in g.incident(i) {
                if k == j {
                    continue;
                }
                let term = Term::Edge { id, other: k };
                let s = term_value(x, i, &term);
                if best.as_ref().is_none_or(|b| s > b.surplus) {
                    best = Some(PairSurplus { surplus: s, term });
                }
            }
            let best = best.unwrap_or_else(|| PairSurplus {
                surplus: -x[i].clone(),
                term: Term::Alone,
            });
            pairs.insert((i, j), best);
        }
    }

    // One entry per edge, oriented so that s_ij >= s_ji.
    let mut list: Vec<(Reverse<Rational>, usize, usize, EdgeId)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let (a, b) = (e.0, e.1);
            let (sab, sba) = (&pairs[&(a, b)].surplus, &pairs[&(b, a)].surplus);
            if sab >= sba {
                (Reverse(sab.clone()), a, b, id)
            } else {
                (Reverse(sba.clone()), b, a, id)
            }
        })
        .collect();
    list.sort();
    let violated = list
        .iter()
        .find(|(Reverse(s), i, j, _)| *s > pairs[&(*j, *i)].surplus)
        .map(|&(_, i, j, _)| (i, j));

    let mut s_set = BTreeSet::new();
    let mut i_set = BTreeSet::new();
    let mut delta_cap = Rational::zero();
    let s_max = violated.map(|(i, j)| pairs[&(i, j)].surplus.clone());
    if let Some(s) = &s_max {
        for (Reverse(v), _, _, id) in &list {
            if v > s {
                s_set.insert(*id);
            } else if v == s {
                i_set.insert(*id);
            }
        }
        if let Some((Reverse(v), ..)) = list.iter().rfind(|(Reverse(v), ..)| v > s) {
            delta_cap = v.clone();
        }
    }
    SurplusState {
        x: x.to_vec(),
        pairs,
        violated,
        s_max,
        delta_cap,
        s_set,
        i_set,
    }
}

#[derive(Debug, Clone)]
pub struct ShiftOutcome {
    pub pair: (usize, usize),
    pub mu: Rational,
    pub state: SurplusState,
}

fn stable_on(g: &Graph, x: &[Rational]) -> bool {
    g.edges()
        .iter()
        .all(|e| &x[e.0] + &x[e.1] >= Rational::one())
}

/// One Maschler shift on the first violated pair, with every clause of the
/// shift lemma checked on the result.
pub fn maschler_shift(g: &Graph, st: &SurplusState) -> Result<ShiftOutcome> {
    let (ip, jp) = st
        .violated
        .ok_or_else(|| Error::precondition("no violated pair to shift"))?;
    let s = st.s_max.clone().expect("violated pair has a surplus");
    let mu = (st.surplus(ip, jp) - st.surplus(jp, ip)) * Rational::new(1, 2);
    let mut x = st.x.clone();
    x[ip] += &mu;
    x[jp] -= &mu;
    let next = surpluses(g, &x);

    // (i) the shifted pair is balanced at s - mu.
    let target = &s - &mu;
    ensure!(
        *next.surplus(ip, jp) == target && *next.surplus(jp, ip) == target,
        "shift on ({}, {}) did not balance the pair at {target}",
        g.name(ip),
        g.name(jp)
    );
    // (ii) s does not increase, and the level set shrinks when it stays.
    if let Some(s2) = &next.s_max {
        ensure!(*s2 <= s, "largest violated surplus rose from {s} to {s2}");
        if *s2 == s {
            ensure!(
                next.i_set.len() < st.i_set.len(),
                "level set did not shrink at surplus {s}"
            );
        }
    }
    // (iii) frozen pairs keep their surpluses.
    for &id in &st.s_set {
        let e = g.edge(id);
        for (a, b) in [(e.0, e.1), (e.1, e.0)] {
            ensure!(
                next.surplus(a, b) == st.surplus(a, b),
                "frozen pair on {} moved",
                g.edge_label(&e)
            );
        }
    }
    // (iv) the total and stability are preserved.
    ensure!(
        x.iter().sum::<Rational>() == st.x.iter().sum::<Rational>(),
        "shift changed the total"
    );
    if stable_on(g, &st.x) {
        ensure!(stable_on(g, &x), "shift broke an edge constraint");
    }
    Ok(ShiftOutcome {
        pair: (ip, jp),
        mu,
        state: next,
    })
}

/// `c - y(T)` for a term, as `(constant, vertices)`.
fn term_parts(i: usize, term: &Term) -> (Rational, Vec<usize>) {
    match term {
        Term::Edge { other, .. } => (Rational::one(), vec![i, *other]),
        Term::Alone => (Rational::zero(), vec![i]),
    }
}

/// The LP `max δ` over allocations `y` that keep the frozen pairs fixed and
/// cap every other surplus by `Δ(x) - δ`. Variables are one `y` per vertex
/// followed by `δ`.
pub fn build_delta_lp(g: &Graph, st: &SurplusState) -> Result<LpProblem> {
    let n = g.vertex_count();
    let mut p = LpProblem::new(Sense::Maximize);
    for v in 0..n {
        p.add_nonneg(format!("y_{}", g.name(v)));
    }
    let d = p.add_nonneg("delta");
    p.set_objective(d, Rational::one());
    let one = Rational::one;
    let total: Rational = st.x.iter().sum();
    p.add_constraint(
        "mass",
        (0..n).map(|v| (v, one())).collect(),
        Relation::Eq,
        total,
    );

    for (&(i, j), ps) in &st.pairs {
        let id = g.edge_id(i, j).expect("pair is an edge");
        let pair = format!("{}_{}", g.name(i), g.name(j));
        let (c, verts) = term_parts(i, &ps.term);
        if st.s_set.contains(&id) {
            // The defining term keeps its value and stays the maximum.
            let fixed: Rational = verts.iter().map(|&v| &st.x[v]).sum();
            p.add_constraint(
                format!("freeze_{pair}"),
                verts.iter().map(|&v| (v, one())).collect(),
                Relation::Eq,
                fixed,
            );
            for &(k, _) in g.incident(i) {
                if k == j {
                    continue;
                }
                // c - y(T) >= 1 - y_i - y_k
                let mut terms: Vec<(usize, Rational)> =
                    verts.iter().map(|&v| (v, -one())).collect();
                terms.push((i, one()));
                terms.push((k, one()));
                p.add_constraint(
                    format!("dominate_{pair}_{}", g.name(k)),
                    terms,
                    Relation::Ge,
                    one() - &c,
                );
            }
        } else {
            // Every outside option of i is capped: c' - y(T') + δ <= Δ.
            let mut options: Vec<Term> = g
                .incident(i)
                .iter()
                .filter(|&&(k, _)| k != j)
                .map(|&(k, id)| Term::Edge { id, other: k })
                .collect();
            if options.is_empty() {
                options.push(Term::Alone);
            }
            for t in options {
                let (c2, vs) = term_parts(i, &t);
                let mut terms: Vec<(usize, Rational)> = vs.iter().map(|&v| (v, -one())).collect();
                terms.push((d, one()));
                let label = match t {
                    Term::Edge { other, .. } => g.name(other).to_string(),
                    Term::Alone => "alone".to_string(),
                };
                p.add_constraint(
                    format!("cap_{pair}_{label}"),
                    terms,
                    Relation::Le,
                    &st.delta_cap - &c2,
                );
            }
        }
    }
    for (id, e) in g.edges().iter().enumerate() {
        let (a, b) = g.edge_names(id);
        p.add_constraint(
            format!("stable_{a}_{b}"),
            vec![(e.0, one()), (e.1, one())],
            Relation::Ge,
            one(),
        );
    }

    let delta0 = match &st.s_max {
        Some(s) => &st.delta_cap - s,
        None => Rational::zero(),
    };
    let mut point = st.x.clone();
    point.push(delta0.clone());
    if st.x.iter().all(|v| !v.is_negative()) {
        ensure!(
            p.is_feasible(&point),
            "current allocation with δ = {delta0} is infeasible for the frontier LP"
        );
    }
    Ok(p)
}

#[derive(Debug, Clone, Default)]
pub struct PrekernelRun {
    pub x: Vec<Rational>,
    pub lp_solves: usize,
    pub shifts: usize,
    /// Trace lines, one per LP round.
    pub trace: Vec<String>,
    /// Non-fatal observations (negative entries mid-run).
    pub diagnostics: Vec<String>,
    pub lemma7_checks: usize,
    pub lemma8_checks: usize,
}

/// Computes a prekernel element reachable from the stable allocation `x0`.
pub fn prekernel(g: &Graph, x0: &[Rational]) -> Result<PrekernelRun> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if x0.len() != n {
        return Err(Error::precondition(
            "allocation length differs from the vertex count",
        ));
    }
    if x0.iter().any(Rational::is_negative) || !stable_on(g, x0) {
        return Err(Error::precondition("starting allocation is not stable"));
    }
    let mut run = PrekernelRun::default();
    let mut st = surpluses(g, x0);
    let mut round = 0usize;
    let note_negative = |run: &mut PrekernelRun, y: &[Rational], when: &str| {
        if let Some(v) = (0..n).find(|&v| y[v].is_negative()) {
            run.diagnostics
                .push(format!("{when}: {} = {} is negative", g.name(v), y[v]));
        }
    };

    while let Some(s_round) = st.s_max.clone() {
        round += 1;
        let frontier = st.s_set.clone();
        let (s_len, i_len) = (st.s_set.len(), st.i_set.len());

        let lp = build_delta_lp(g, &st)?;
        let sol = lp::solve(&lp);
        run.lp_solves += 1;
        ensure!(
            sol.status == LpStatus::Optimal,
            "frontier LP is not optimal: {:?}",
            sol.status
        );
        ensure!(run.lp_solves <= m, "more than |E'| = {m} frontier LPs");
        let delta_opt = sol.values[n].clone();
        let mut sy = surpluses(g, &sol.values[..n]);
        if sy.violated.is_some() {
            ensure!(
                frontier.is_subset(&sy.s_set),
                "frontier shrank after the LP step"
            );
        }

        let mut shifts = 0usize;
        if sy.violated.is_some() && sy.s_set == frontier {
            let level = sy.s_max.clone().unwrap();
            ensure!(
                delta_opt == &st.delta_cap - &level,
                "LP optimum δ = {delta_opt} differs from Δ - s = {}",
                &st.delta_cap - &level
            );
            let mut last_delta = delta_opt.clone();
            loop {
                let out = maschler_shift(g, &sy)?;
                run.lemma7_checks += 1;
                shifts += 1;
                run.shifts += 1;
                ensure!(shifts <= m, "s did not decrease within |E'| = {m} shifts");
                ensure!(run.shifts <= m * m, "more than |E'|^2 = {} shifts", m * m);
                sy = out.state;
                note_negative(&mut run, &sy.x, &format!("round {round} shift {shifts}"));
                let Some(s_now) = sy.s_max.clone() else { break };
                if sy.s_set == frontier {
                    let d = &st.delta_cap - &s_now;
                    ensure!(d >= last_delta, "δ decreased along the shift sequence");
                    if sy.x.iter().all(|v| !v.is_negative()) {
                        let mut point = sy.x.clone();
                        point.push(d.clone());
                        ensure!(
                            lp.is_feasible(&point),
                            "shifted point is infeasible for the frontier LP"
                        );
                    }
                    run.lemma8_checks += 1;
                    last_delta = d;
                }
                if s_now < level {
                    break;
                }
            }
            if sy.violated.is_some() {
                ensure!(
                    frontier.is_subset(&sy.s_set) && sy.s_set.len() > frontier.len(),
                    "frontier did not grow after s decreased"
                );
            }
        }
        run.trace.push(format!(
            "round={round} s={s_round} |S|={s_len} |I|={i_len} shifts={shifts}"
        ));
        st = sy;
    }

    ensure!(
        st.max_imbalance().is_zero(),
        "final surpluses are unbalanced"
    );
    ensure!(stable_on(g, &st.x), "final allocation is not stable");
    ensure!(
        st.x.iter().all(|v| !v.is_negative()),
        "final allocation has a negative entry"
    );
    ensure!(
        st.x.iter().sum::<Rational>() == x0.iter().sum::<Rational>(),
        "prekernel changed the total"
    );
    run.x = st.x;
    Ok(run)
}

/// `α'_i = max{1 - x_j : ij ∈ δ(i) \ M'}`, 0 without such an edge.
pub fn alternatives(g: &Graph, m: &Matching, x: &[Rational]) -> Vec<Rational> {
    (0..g.vertex_count())
        .map(|i| {
            g.incident(i)
                .iter()
                .filter(|&&(_, id)| !m.contains(id))
                .map(|&(j, _)| Rational::one() - &x[j])
                .max()
                .unwrap_or_else(Rational::zero)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BalancedOutcome {
    /// The graph without the blocking set.
    pub graph: Graph,
    pub matching: Matching,
    pub allocation: Vec<Rational>,
    pub alternatives: Vec<Rational>,
    /// `(x_i - α'_i) - (x_j - α'_j)` per matching edge of `graph`.
    pub residuals: Vec<(EdgeId, Rational)>,
    pub nu: usize,
    pub run: PrekernelRun,
}

/// Matching, balanced allocation and balance report on `g` minus the
/// blocking set of `result`.
pub fn balanced_outcome(g: &Graph, result: &BlockingSetResult) -> Result<BalancedOutcome> {
    let nu = matching_number(g);
    let rest = g.without_edges(&result.blocking_set);
    let matching = max_matching(&rest);

    let mut x = result.x_hat.clone();
    let total: Rational = x.iter().sum();
    let target = Rational::from(nu as i64);
    ensure!(total <= target, "allocation total {total} exceeds ν = {nu}");
    if total < target {
        x[0] += &(&target - &total);
    }
    let run = prekernel(&rest, &x)?;
    let xbar = run.x.clone();
    let alt = alternatives(&rest, &matching, &xbar);
    let st = surpluses(&rest, &xbar);

    ensure!(xbar.iter().sum::<Rational>() <= target, "(S1) fails");
    ensure!(stable_on(&rest, &xbar), "(S2) fails");
    let mut residuals = Vec::new();
    for &id in &matching.edges {
        let e = rest.edge(id);
        let r = (&xbar[e.0] - &alt[e.0]) - (&xbar[e.1] - &alt[e.1]);
        let balanced = st.surplus(e.0, e.1) == st.surplus(e.1, e.0);
        ensure!(
            r.is_zero() == balanced,
            "balance and surplus tests disagree on {}",
            rest.edge_label(&e)
        );
        ensure!(r.is_zero(), "(S3) fails on {}", rest.edge_label(&e));
        residuals.push((id, r));
    }
    Ok(BalancedOutcome {
        graph: rest,
        matching,
        allocation: xbar,
        alternatives: alt,
        residuals,
        nu,
        run,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockset::stabilize;
    use crate::rational::q;
    use proptest::prelude::*;

    fn g(edges: &[(&str, &str)]) -> Graph {
        Graph::new(Vec::<&str>::new(), edges.iter().copied()).unwrap()
    }

    fn p4() -> Graph {
        g(&[("a", "b"), ("b", "c"), ("c", "d")])
    }

    fn v(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(n, d)| q(n, d)).collect()
    }

    #[test]
    fn surplus_examples() {
        let p3 = g(&[("a", "b"), ("b", "c")]);
        let st = surpluses(&p3, &v(&[(0, 1), (1, 1), (0, 1)]));
        assert_eq!(
            st.pairs[&(0, 1)],
            PairSurplus {
                surplus: q(0, 1),
                term: Term::Alone
            }
        );
        assert_eq!(*st.surplus(1, 0), q(0, 1));
        assert_eq!(*st.surplus(1, 2), q(0, 1));
        assert_eq!(*st.surplus(2, 1), q(0, 1));
        assert!(st.is_balanced());

        let edge = g(&[("u", "v")]);
        let st = surpluses(&edge, &v(&[(1, 1), (0, 1)]));
        assert_eq!(*st.surplus(0, 1), q(-1, 1));
        assert_eq!(*st.surplus(1, 0), q(0, 1));
        assert_eq!(st.violated, Some((1, 0)));

        let st = surpluses(&p4(), &v(&[(0, 1), (1, 1), (1, 1), (0, 1)]));
        assert_eq!(*st.surplus(0, 1), q(0, 1));
        assert_eq!(*st.surplus(1, 0), q(-1, 1));
        assert_eq!(st.pairs[&(1, 0)].term, Term::Edge { id: 1, other: 2 });
    }

    #[test]
    fn shift_examples() {
        let edge = g(&[("u", "v")]);
        let out = maschler_shift(&edge, &surpluses(&edge, &v(&[(1, 1), (0, 1)]))).unwrap();
        assert_eq!(out.mu, q(1, 2));
        assert_eq!(out.state.x, v(&[(1, 2), (1, 2)]));

        let out = maschler_shift(
            &p4(),
            &surpluses(&p4(), &v(&[(0, 1), (1, 1), (1, 1), (0, 1)])),
        )
        .unwrap();
        assert_eq!(out.pair, (0, 1));
        assert_eq!(out.state.x, v(&[(1, 2), (1, 2), (1, 1), (0, 1)]));

        let balanced = surpluses(&edge, &v(&[(1, 2), (1, 2)]));
        assert!(matches!(
            maschler_shift(&edge, &balanced),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn delta_lp_examples() {
        let p3 = g(&[("a", "b"), ("b", "c")]);
        let st = surpluses(&p3, &v(&[(0, 1), (1, 1), (0, 1)]));
        let s = lp::solve(&build_delta_lp(&p3, &st).unwrap());
        assert_eq!(s.status, LpStatus::Optimal);

        let edge = g(&[("u", "v")]);
        let st = surpluses(&edge, &v(&[(1, 2), (1, 2)]));
        let s = lp::solve(&build_delta_lp(&edge, &st).unwrap());
        assert_eq!(s.values, v(&[(1, 2), (1, 2), (1, 2)]));

        let x = v(&[(1, 3), (2, 3), (2, 3), (1, 3)]);
        let st = surpluses(&p4(), &x);
        assert!(st.is_balanced());
        let s = lp::solve(&build_delta_lp(&p4(), &st).unwrap());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.objective >= Rational::zero());
    }

    #[test]
    fn prekernel_examples() {
        let edge = g(&[("u", "v")]);
        assert_eq!(
            prekernel(&edge, &v(&[(1, 1), (0, 1)])).unwrap().x,
            v(&[(1, 2), (1, 2)])
        );
        let run = prekernel(&p4(), &v(&[(0, 1), (1, 1), (1, 1), (0, 1)])).unwrap();
        assert_eq!(run.x, v(&[(1, 3), (2, 3), (2, 3), (1, 3)]));
        assert!(run.lp_solves <= 3 && run.shifts <= 9);
        let p3 = g(&[("a", "b"), ("b", "c")]);
        let run = prekernel(&p3, &v(&[(0, 1), (1, 1), (0, 1)])).unwrap();
        assert_eq!(run.x, v(&[(0, 1), (1, 1), (0, 1)]));
        assert_eq!(run.lp_solves, 0);
    }

    #[test]
    fn balanced_examples() {
        let out = balanced_outcome(&p4(), &stabilize(&p4()).unwrap()).unwrap();
        assert_eq!(out.allocation, v(&[(1, 3), (2, 3), (2, 3), (1, 3)]));
        assert_eq!(out.matching.edges, vec![0, 2]);

        let edge = g(&[("u", "v")]);
        let out = balanced_outcome(&edge, &stabilize(&edge).unwrap()).unwrap();
        assert_eq!(out.allocation, v(&[(1, 2), (1, 2)]));

        let k3 = g(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let out = balanced_outcome(&k3, &stabilize(&k3).unwrap()).unwrap();
        assert!(out.residuals.iter().all(|(_, r)| r.is_zero()));
        assert_eq!(out.allocation.iter().sum::<Rational>(), Rational::one());

        let fixed = BlockingSetResult {
            blocking_set: [k3.edge_id_by_name("a", "c").unwrap()]
                .into_iter()
                .collect(),
            x_hat: v(&[(0, 1), (1, 1), (0, 1)]),
            root_lp_value: q(1, 1),
            omega: q(1, 1),
            guarantee_factor: q(3, 1),
            doubled: false,
            trace: Vec::new(),
            stats: Default::default(),
        };
        let out = balanced_outcome(&k3, &fixed).unwrap();
        assert_eq!(out.allocation, v(&[(0, 1), (1, 1), (0, 1)]));
        assert_eq!(out.matching.edges.len(), 1);
        assert_eq!(out.alternatives, v(&[(0, 1), (1, 1), (0, 1)]));
        assert_eq!(out.run.lp_solves, 0);
        assert!(out.residuals.iter().all(|(_, r)| r.is_zero()));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (
            2usize..=8,
            proptest::collection::vec((0usize..8, 0usize..8), 1..12),
        )
            .prop_map(|(n, raw)| {
                let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let edges: Vec<(&str, &str)> = raw
                    .iter()
                    .filter(|(a, b)| a != b && *a < n && *b < n)
                    .map(|&(a, b)| (names[a].as_str(), names[b].as_str()))
                    .collect();
                Graph::new(names.iter().map(String::as_str), edges).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn pipeline_balances(gr in arb_graph()) {
            let r = stabilize(&gr).unwrap();
            let out = balanced_outcome(&gr, &r).unwrap();
            let m = out.graph.edge_count();
            prop_assert!(out.run.lp_solves <= m);
            prop_assert!(out.run.shifts <= m * m);
            prop_assert!(surpluses(&out.graph, &out.allocation).max_imbalance().is_zero());
        }
    }
}
