use super::linalg::RowSpan;
use super::simplex::reduced_costs;
use super::{LpProblem, LpSolution, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// Rank of the constraint and bound rows that hold with equality at `x`.
pub fn active_rank(p: &LpProblem, x: &[Rational]) -> usize {
    let n = p.num_vars();
    let mut span = RowSpan::new(n);
    for con in &p.constraints {
        if con.is_tight(x) {
            span.insert(&con.dense(n));
            if span.rank() == n {
                return n;
            }
        }
    }
    for (j, v) in p.vars.iter().enumerate() {
        let at_bound = v.lower.as_ref() == Some(&x[j]) || v.upper.as_ref() == Some(&x[j]);
        if at_bound {
            let mut row = vec![Rational::zero(); n];
            row[j] = Rational::one();
            span.insert(&row);
        }
    }
    span.rank()
}

/// Re-verifies `sol` against `p` with exact arithmetic. Returns one message
/// per violated condition; an empty list means the certificate holds.
pub fn check_certificates(p: &LpProblem, sol: &LpSolution) -> Vec<String> {
    match sol.status {
        LpStatus::Optimal => check_optimal(p, sol),
        LpStatus::Infeasible => check_farkas(p, sol),
        LpStatus::Unbounded => Vec::new(),
    }
}

fn check_optimal(p: &LpProblem, sol: &LpSolution) -> Vec<String> {
    let mut errs = Vec::new();
    let x = &sol.values;
    if x.len() != p.num_vars() || sol.duals.len() != p.constraints.len() {
        errs.push("solution has the wrong shape".to_string());
        return errs;
    }
    for (j, v) in p.vars.iter().enumerate() {
        if v.lower.as_ref().is_some_and(|l| &x[j] < l)
            || v.upper.as_ref().is_some_and(|u| &x[j] > u)
        {
            errs.push(format!("primal: {} = {} violates its bounds", v.name, x[j]));
        }
    }
    for con in &p.constraints {
        if !con.is_satisfied(x) {
            errs.push(format!(
                "primal: {} violated (lhs {} {} {})",
                con.name,
                con.lhs(x),
                con.relation,
                con.rhs
            ));
        }
    }
    if p.objective_value(x) != sol.objective {
        errs.push(format!(
            "objective {} differs from c.x = {}",
            sol.objective,
            p.objective_value(x)
        ));
    }

    // Dual signs: for a minimization, `>=` rows carry y >= 0 and `<=` rows y <= 0.
    let min = p.sense == Sense::Minimize;
    for (con, y) in p.constraints.iter().zip(&sol.duals) {
        let ok = match (con.relation, min) {
            (Relation::Eq, _) => true,
            (Relation::Ge, true) | (Relation::Le, false) => !y.is_negative(),
            (Relation::Le, true) | (Relation::Ge, false) => !y.is_positive(),
        };
        if !ok {
            errs.push(format!(
                "dual: {} has multiplier {} of the wrong sign",
                con.name, y
            ));
        }
        if !y.is_zero() && !con.is_tight(x) {
            errs.push(format!(
                "complementary slackness: {} is slack but has multiplier {}",
                con.name, y
            ));
        }
    }

    let d = reduced_costs(p, &sol.duals);
    if sol.reduced_costs != d {
        errs.push("reported reduced costs differ from c - A^T y".to_string());
    }
    // Each reduced cost must be absorbed by an active bound in the right direction.
    let mut dual_obj: Rational = p
        .constraints
        .iter()
        .zip(&sol.duals)
        .map(|(c, y)| &c.rhs * y)
        .sum();
    for (j, v) in p.vars.iter().enumerate() {
        if d[j].is_zero() {
            continue;
        }
        let at_lower = v.lower.as_ref() == Some(&x[j]);
        let at_upper = v.upper.as_ref() == Some(&x[j]);
        let improving_up = if min {
            d[j].is_negative()
        } else {
            d[j].is_positive()
        };
        let ok = if improving_up { at_upper } else { at_lower };
        if !ok {
            errs.push(format!(
                "dual: reduced cost {} of {} is not supported by an active bound",
                d[j], v.name
            ));
        } else {
            dual_obj += &(&d[j] * &x[j]);
        }
    }
    if dual_obj != sol.objective {
        errs.push(format!(
            "strong duality: primal {} but dual {}",
            sol.objective, dual_obj
        ));
    }

    if p.vars
        .iter()
        .all(|v| v.lower.is_some() || v.upper.is_some())
    {
        let r = active_rank(p, x);
        if r < p.num_vars() {
            errs.push(format!(
                "basis: active rows have rank {r} < {}",
                p.num_vars()
            ));
        }
    }
    errs
}

/// An infeasibility certificate `y` (signed like minimization duals) proves
/// that `y^T A x >= y^T b` cannot hold anywhere inside the variable bounds.
fn check_farkas(p: &LpProblem, sol: &LpSolution) -> Vec<String> {
    let Some(y) = &sol.farkas else {
        return vec!["infeasible without a Farkas certificate".to_string()];
    };
    let mut errs = Vec::new();
    let mut g = vec![Rational::zero(); p.num_vars()];
    let mut rhs = Rational::zero();
    for (con, yi) in p.constraints.iter().zip(y) {
        let ok = match con.relation {
            Relation::Eq => true,
            Relation::Ge => !yi.is_negative(),
            Relation::Le => !yi.is_positive(),
        };
        if !ok {
            errs.push(format!(
                "farkas: {} has multiplier {} of the wrong sign",
                con.name, yi
            ));
        }
        if yi.is_zero() {
            continue;
        }
        rhs += &(&con.rhs * yi);
        for (j, a) in &con.terms {
            g[*j] += &(a * yi);
        }
    }
    let mut sup = Rational::zero();
    for (j, v) in p.vars.iter().enumerate() {
        let bound = if g[j].is_positive() {
            v.upper.as_ref()
        } else if g[j].is_negative() {
            v.lower.as_ref()
        } else {
            continue;
        };
        match bound {
            Some(b) => sup += &(&g[j] * b),
            None => {
                errs.push(format!("farkas: combination is unbounded along {}", v.name));
                return errs;
            }
        }
    }
    if sup >= rhs {
        errs.push(format!(
            "farkas: max of combination {} does not fall below {}",
            sup, rhs
        ));
    }
    errs
}
