//! Exact-rational linear programming.
//!
//! [`solve`] runs a two-phase dense tableau simplex with Bland's rule, so it
//! always terminates and returns a basic (vertex) optimum together with dual
//! values. [`check_certificates`] re-verifies a solution from scratch.

mod certificate;
pub mod linalg;
mod simplex;

use std::fmt;

use crate::rational::Rational;

pub use certificate::{active_rank, check_certificates};
pub use simplex::solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    /// `None` means unbounded below.
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    /// Sparse `(variable, coefficient)` terms; repeated variables are summed.
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.terms.iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.lhs(x) == self.rhs
    }

    /// Dense coefficient row of width `n`.
    pub fn dense(&self, n: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); n];
        for (j, a) in &self.terms {
            row[*j] += a;
        }
        row
    }
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub vars: Vec<Variable>,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(sense: Sense) -> Self {
        LpProblem {
            sense,
            vars: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    /// Adds a variable with objective coefficient 0.
    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        self.objective.push(Rational::zero());
        self.vars.len() - 1
    }

    /// Adds a variable bounded below by zero.
    pub fn add_nonneg(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, Some(Rational::zero()), None)
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> usize {
        debug_assert!(terms.iter().all(|(j, _)| *j < self.vars.len()));
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Whether `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.vars.len()
            && self.vars.iter().zip(x).all(|(v, val)| {
                v.lower.as_ref().is_none_or(|l| val >= l)
                    && v.upper.as_ref().is_none_or(|u| val <= u)
            })
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

/// Deterministic human-readable dump.
impl fmt::Display for LpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |j: usize, a: &Rational| format!("{} {}", a, self.vars[j].name);
        let obj: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| term(j, c))
            .collect();
        let sense = match self.sense {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        };
        writeln!(
            f,
            "{sense} {}",
            if obj.is_empty() {
                "0".to_string()
            } else {
                obj.join(" + ")
            }
        )?;
        writeln!(f, "subject to")?;
        for c in &self.constraints {
            let lhs: Vec<String> = c.terms.iter().map(|(j, a)| term(*j, a)).collect();
            writeln!(
                f,
                "  {}: {} {} {}",
                c.name,
                lhs.join(" + "),
                c.relation,
                c.rhs
            )?;
        }
        writeln!(f, "bounds")?;
        for v in &self.vars {
            let lo = v
                .lower
                .as_ref()
                .map_or("-inf".to_string(), |l| l.to_string());
            let hi = v
                .upper
                .as_ref()
                .map_or("+inf".to_string(), |u| u.to_string());
            writeln!(f, "  {lo} <= {} <= {hi}", v.name)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point (empty unless optimal).
    pub values: Vec<Rational>,
    pub objective: Rational,
    /// One dual value per constraint, in the sign convention of the
    /// problem's own sense (for a minimization, `>=` rows carry duals `>= 0`).
    pub duals: Vec<Rational>,
    /// `c_j - sum_i a_ij y_i` per variable.
    pub reduced_costs: Vec<Rational>,
    /// Constraints in the defining system of the final basis: equality rows
    /// and inequality rows whose slack is nonbasic.
    pub basis_rows: Vec<usize>,
    /// Constraints satisfied with equality at the returned point.
    pub tight_rows: Vec<usize>,
    /// For infeasible problems, phase-one duals certifying infeasibility.
    pub farkas: Option<Vec<Rational>>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}
