use std::collections::{BTreeMap, BTreeSet};

use super::GbsInstance;
use crate::error::{ensure, Error, Result};
use crate::graph::EdgeId;
use crate::lp::linalg::RowSpan;
use crate::lp::{self, LpProblem, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// Reason a basic solution admits an ordinary rounding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoodCertificate {
    /// `x_u = 1`.
    UnitVertex(usize),
    /// `z_e = 0` for an `e1` edge.
    ZeroEdge(EdgeId),
    /// `z_e >= 1/3` for an `e1` edge.
    HeavyEdge(EdgeId),
}

/// Structure of a bad extreme point: `x = 1 - alpha` on `x_set`, `alpha` on
/// `y_set`, `0` on `o_set`, and `z = 1 - alpha` on every `e1` edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadPartition {
    pub x_set: Vec<usize>,
    pub y_set: Vec<usize>,
    pub o_set: Vec<usize>,
    /// Exceeds 2/3.
    pub alpha: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Good(GoodCertificate),
    Bad(BadPartition),
    /// No `e1` edges and no unit vertex; finished by an integral cover.
    Covering,
}

#[derive(Debug, Clone)]
pub struct ExtremePoint {
    /// Indexed by ambient vertex; zero outside the instance.
    pub x: Vec<Rational>,
    /// One entry per `e1` edge.
    pub z: BTreeMap<EdgeId, Rational>,
    pub value: Rational,
    /// For fractional points: the larger of the two fractional values.
    pub alpha: Option<Rational>,
    /// `e1` rows of the defining system.
    pub tight_e1: Vec<EdgeId>,
    /// `e2` rows of the defining system.
    pub tight_e2: Vec<EdgeId>,
    pub budget_tight: bool,
    pub fractional: bool,
    /// Whether the two-value structure was checked (fractional, budget tight).
    pub lemma2_checked: bool,
    pub classification: Classification,
}

fn build_lp(
    inst: &GbsInstance,
    verts: &[usize],
) -> (LpProblem, BTreeMap<usize, usize>, Vec<EdgeId>) {
    let g = &inst.graph;
    let mut p = LpProblem::new(Sense::Minimize);
    let col: BTreeMap<usize, usize> = verts
        .iter()
        .map(|&v| (v, p.add_nonneg(format!("x_{}", g.name(v)))))
        .collect();
    let e1: Vec<EdgeId> = inst.e1.iter().copied().collect();
    let zcol: Vec<usize> = e1
        .iter()
        .map(|&id| {
            let (a, b) = g.edge_names(id);
            let z = p.add_nonneg(format!("z_{a}_{b}"));
            p.set_objective(z, Rational::one());
            z
        })
        .collect();
    let one = Rational::one;
    for (k, &id) in e1.iter().enumerate() {
        let e = g.edge(id);
        let (a, b) = g.edge_names(id);
        p.add_constraint(
            format!("e1_{a}_{b}"),
            vec![(col[&e.0], one()), (col[&e.1], one()), (zcol[k], one())],
            Relation::Ge,
            one(),
        );
    }
    for &id in &inst.e2 {
        let e = g.edge(id);
        let (a, b) = g.edge_names(id);
        p.add_constraint(
            format!("e2_{a}_{b}"),
            vec![(col[&e.0], one()), (col[&e.1], one())],
            Relation::Ge,
            one(),
        );
    }
    let all = verts.iter().map(|v| (col[v], one())).collect();
    p.add_constraint("budget", all, Relation::Le, Rational::from(inst.nu as i64));
    (p, col, e1)
}

/// Optimal basic solution of the relaxation, certificates checked.
fn solve_relaxation(
    inst: &GbsInstance,
) -> Result<(Vec<Rational>, BTreeMap<EdgeId, Rational>, Rational)> {
    let verts = inst.vertices();
    let (p, col, e1) = build_lp(inst, &verts);
    let sol = lp::solve(&p);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::precondition(
                "the fixed edges cannot be covered within the budget",
            ));
        }
        LpStatus::Unbounded => {
            return Err(Error::invariant(
                "blocking set relaxation reported unbounded",
            ))
        }
    }
    let errs = lp::check_certificates(&p, &sol);
    ensure!(
        errs.is_empty(),
        "relaxation certificate failed: {}",
        errs.join("; ")
    );

    let mut x = vec![Rational::zero(); inst.graph.vertex_count()];
    for (&v, &c) in &col {
        x[v] = sol.values[c].clone();
    }
    let z: BTreeMap<EdgeId, Rational> = e1
        .iter()
        .enumerate()
        .map(|(k, &id)| (id, sol.values[verts.len() + k].clone()))
        .collect();
    Ok((x, z, sol.objective))
}

/// Optimum of the relaxation on any instance, bipartite or not.
pub fn relaxation_value(inst: &GbsInstance) -> Result<Rational> {
    Ok(solve_relaxation(inst)?.2)
}

/// Optimal basic solution of the relaxation on a bipartite `inst`, classified.
pub fn solve_gbs_lp(inst: &GbsInstance) -> Result<ExtremePoint> {
    if !inst.is_bipartite() {
        return Err(Error::precondition(
            "extreme-point analysis needs a bipartite instance",
        ));
    }
    let (x, z, value) = solve_relaxation(inst)?;
    let ep = analyze(inst, x, z)?;
    ensure!(ep.value == value, "objective mismatch");
    Ok(ep)
}

/// Classifies a basic feasible solution `(x, z)` of the relaxation on `inst`.
pub fn classify(
    inst: &GbsInstance,
    x: &[Rational],
    z: &BTreeMap<EdgeId, Rational>,
) -> Result<Classification> {
    if !inst.is_bipartite() {
        return Err(Error::precondition(
            "extreme-point analysis needs a bipartite instance",
        ));
    }
    Ok(analyze(inst, x.to_vec(), z.clone())?.classification)
}

fn analyze(
    inst: &GbsInstance,
    x: Vec<Rational>,
    z: BTreeMap<EdgeId, Rational>,
) -> Result<ExtremePoint> {
    let g = &inst.graph;
    let verts = inst.vertices();
    let one = Rational::one();
    let nu = Rational::from(inst.nu as i64);
    ensure!(
        x.len() == g.vertex_count(),
        "allocation has the wrong length"
    );
    ensure!(
        z.len() == inst.e1.len() && inst.e1.iter().all(|id| z.contains_key(id)),
        "z must have one entry per e1 edge"
    );

    // Feasibility.
    ensure!(
        verts.iter().all(|&v| !x[v].is_negative()),
        "negative allocation"
    );
    ensure!(z.values().all(|v| !v.is_negative()), "negative z");
    let pair = |id: EdgeId| {
        let e = g.edge(id);
        &x[e.0] + &x[e.1]
    };
    for (&id, zv) in &z {
        ensure!(
            pair(id) + zv >= one,
            "e1 edge {} uncovered",
            g.edge_label(&g.edge(id))
        );
    }
    for &id in &inst.e2 {
        ensure!(
            pair(id) >= one,
            "e2 edge {} uncovered",
            g.edge_label(&g.edge(id))
        );
    }
    let total: Rational = verts.iter().map(|&v| &x[v]).sum();
    ensure!(total <= nu, "allocation total {total} exceeds budget {nu}");
    let budget_tight = total == nu;

    // Defining system restricted to the support, chosen greedily: e1 rows,
    // then the budget, then e2 rows.
    let xs: Vec<usize> = verts
        .iter()
        .copied()
        .filter(|&v| x[v].is_positive())
        .collect();
    let zs: Vec<EdgeId> = z
        .iter()
        .filter(|(_, v)| v.is_positive())
        .map(|(&id, _)| id)
        .collect();
    let width = xs.len() + zs.len();
    let xpos: BTreeMap<usize, usize> = xs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let zpos: BTreeMap<EdgeId, usize> = zs
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, xs.len() + i))
        .collect();
    let row_of = |id: EdgeId| {
        let mut row = vec![Rational::zero(); width];
        let e = g.edge(id);
        for v in [e.0, e.1] {
            if let Some(&c) = xpos.get(&v) {
                row[c] = Rational::one();
            }
        }
        if let Some(&c) = zpos.get(&id) {
            row[c] = Rational::one();
        }
        row
    };
    let mut span = RowSpan::new(width);
    let mut tight_e1 = Vec::new();
    let mut tight_e2 = Vec::new();
    for (&id, zv) in &z {
        if pair(id) + zv == one && span.insert(&row_of(id)) {
            tight_e1.push(id);
        }
    }
    if budget_tight {
        let mut row = vec![Rational::zero(); width];
        for c in row.iter_mut().take(xs.len()) {
            *c = Rational::one();
        }
        span.insert(&row);
    }
    for &id in &inst.e2 {
        if pair(id) == one && span.insert(&row_of(id)) {
            tight_e2.push(id);
        }
    }
    ensure!(
        span.rank() == width,
        "point is not basic: rank {} < support {}",
        span.rank(),
        width
    );

    let fractional =
        verts.iter().any(|&v| !x[v].is_integer()) || z.values().any(|v| !v.is_integer());
    let mut alpha = None;
    let mut lemma2_checked = false;
    if fractional {
        ensure!(budget_tight, "fractional basic point with a slack budget");
        let fracs: BTreeSet<Rational> = verts
            .iter()
            .map(|&v| x[v].clone())
            .chain(z.values().cloned())
            .filter(|v| !v.is_integer())
            .collect();
        let vals: Vec<&Rational> = fracs.iter().collect();
        let ok = match vals.as_slice() {
            [a] => **a > Rational::zero() && **a < one,
            [a, b] => *a + *b == one && **a > Rational::zero(),
            _ => false,
        };
        ensure!(
            ok,
            "fractional values {:?} are not of the form {{α, 1-α}}",
            vals.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        );
        let a = vals[0].clone();
        alpha = Some(a.clone().max(&one - &a));
        lemma2_checked = true;
    }

    let third = Rational::new(1, 3);
    let good = verts
        .iter()
        .find(|&&v| x[v] == one)
        .map(|&v| GoodCertificate::UnitVertex(v))
        .or_else(|| {
            z.iter()
                .find(|(_, v)| v.is_zero())
                .map(|(&id, _)| GoodCertificate::ZeroEdge(id))
        })
        .or_else(|| {
            z.iter()
                .find(|(_, v)| **v >= third)
                .map(|(&id, _)| GoodCertificate::HeavyEdge(id))
        });

    let classification = match good {
        Some(c) => Classification::Good(c),
        None if z.is_empty() => Classification::Covering,
        None => Classification::Bad(bad_structure(inst, &x, &z, &verts, &tight_e1, &tight_e2)?),
    };
    let value = z.values().sum();
    Ok(ExtremePoint {
        x,
        z,
        value,
        alpha,
        tight_e1,
        tight_e2,
        budget_tight,
        fractional,
        lemma2_checked,
        classification,
    })
}

/// Derives and validates the X/Y/O partition of a bad point.
fn bad_structure(
    inst: &GbsInstance,
    x: &[Rational],
    z: &BTreeMap<EdgeId, Rational>,
    verts: &[usize],
    tight_e1: &[EdgeId],
    tight_e2: &[EdgeId],
) -> Result<BadPartition> {
    let g = &inst.graph;
    let one = Rational::one();
    let first = z
        .values()
        .next()
        .ok_or_else(|| Error::invariant("bad point without e1 edges"))?;
    ensure!(
        z.values().all(|v| v == first),
        "bad point has unequal z values"
    );
    let beta = first.clone();
    ensure!(
        beta.is_positive() && beta < Rational::new(1, 3),
        "bad point has z = {beta}"
    );
    let alpha = &one - &beta;

    let (mut xs, mut ys, mut os) = (Vec::new(), Vec::new(), Vec::new());
    for &v in verts {
        if x[v] == beta {
            xs.push(v);
        } else if x[v] == alpha {
            ys.push(v);
        } else if x[v].is_zero() {
            os.push(v);
        } else {
            return Err(Error::invariant(format!(
                "vertex {} has value {} outside {{0, α, 1-α}}",
                g.name(v),
                x[v]
            )));
        }
    }
    let mut side = vec![0u8; g.vertex_count()];
    for &v in &xs {
        side[v] = b'X';
    }
    for &v in &ys {
        side[v] = b'Y';
    }
    for &v in &os {
        side[v] = b'O';
    }
    for id in inst.edges() {
        let e = g.edge(id);
        let (a, b) = (side[e.0], side[e.1]);
        ensure!(
            a == b'Y' || b == b'Y',
            "edge {} avoids Y: O ∪ X is not independent",
            g.edge_label(&e)
        );
        ensure!(
            !(a == b'Y' && b == b'Y'),
            "edge {} has two Y endpoints",
            g.edge_label(&e)
        );
    }
    ensure!(
        tight_e1.len() == inst.e1.len(),
        "some e1 row is missing from the defining system"
    );
    for &id in tight_e1 {
        let e = g.edge(id);
        let mut ends = [side[e.0], side[e.1]];
        ends.sort_unstable();
        ensure!(
            ends == *b"OY",
            "defining e1 edge {} is not O-Y",
            g.edge_label(&e)
        );
    }
    // Defining e2 edges must form a spanning tree of X ∪ Y.
    let xy: Vec<usize> = xs.iter().chain(&ys).copied().collect();
    ensure!(
        tight_e2.len() + 1 == xy.len(),
        "defining e2 edges: {} for {} vertices of X ∪ Y",
        tight_e2.len(),
        xy.len()
    );
    let mut parent: BTreeMap<usize, usize> = xy.iter().map(|&v| (v, v)).collect();
    fn find(p: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let mut r = v;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(v, r);
        r
    }
    for &id in tight_e2 {
        let e = g.edge(id);
        ensure!(
            parent.contains_key(&e.0) && parent.contains_key(&e.1),
            "defining e2 edge leaves X ∪ Y"
        );
        let (a, b) = (find(&mut parent, e.0), find(&mut parent, e.1));
        ensure!(a != b, "defining e2 edges contain a cycle");
        parent.insert(a, b);
    }
    let nu = inst.nu;
    ensure!(
        xs.len() + ys.len() < 2 * nu && nu < ys.len(),
        "budget bound fails: |X| = {}, |Y| = {}, nu = {}",
        xs.len(),
        ys.len(),
        nu
    );
    Ok(BadPartition {
        x_set: xs,
        y_set: ys,
        o_set: os,
        alpha,
    })
}
