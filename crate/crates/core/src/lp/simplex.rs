use super::linalg::solve_square;
use super::{LpProblem, LpSolution, LpStatus, Relation, Sense};
use crate::rational::Rational;

/// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `x = l + x'`
    Shift { col: usize, lower: Rational },
    /// `x = u - x'`
    Mirror { col: usize, upper: Rational },
    /// `x = x+ - x-`
    Split { pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Le,
    Ge,
    Eq,
}

/// Equality-form problem `A x = b, x >= 0, b >= 0` with slack columns.
struct Standard {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cost: Vec<Rational>,
    /// Original constraint for each row (`None` for bound rows).
    origin: Vec<Option<usize>>,
    /// `+1` or `-1`: the factor applied to the original row.
    sign: Vec<Rational>,
    slack: Vec<Option<usize>>,
    kind: Vec<RowKind>,
    vars: Vec<VarMap>,
    ncols: usize,
}

fn standardize(p: &LpProblem) -> Standard {
    let mut vars = Vec::with_capacity(p.vars.len());
    let mut ncols = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for v in &p.vars {
        match (&v.lower, &v.upper) {
            (Some(l), up) => {
                if let Some(u) = up {
                    bound_rows.push((ncols, u - l));
                }
                vars.push(VarMap::Shift {
                    col: ncols,
                    lower: l.clone(),
                });
                ncols += 1;
            }
            (None, Some(u)) => {
                vars.push(VarMap::Mirror {
                    col: ncols,
                    upper: u.clone(),
                });
                ncols += 1;
            }
            (None, None) => {
                vars.push(VarMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }
    let n_struct = ncols;

    let flip = p.sense == Sense::Maximize;
    let mut cost = vec![Rational::zero(); n_struct];
    for (k, c) in p.objective.iter().enumerate() {
        let c = if flip { -c } else { c.clone() };
        match &vars[k] {
            VarMap::Shift { col, .. } => cost[*col] += &c,
            VarMap::Mirror { col, .. } => cost[*col] -= &c,
            VarMap::Split { pos, neg } => {
                cost[*pos] += &c;
                cost[*neg] -= &c;
            }
        }
    }

    let mut rows: Vec<(Vec<Rational>, RowKind, Rational, Option<usize>)> = Vec::new();
    for (i, con) in p.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); n_struct];
        let mut rhs = con.rhs.clone();
        for (k, a) in &con.terms {
            match &vars[*k] {
                VarMap::Shift { col, lower } => {
                    row[*col] += a;
                    rhs -= &(a * lower);
                }
                VarMap::Mirror { col, upper } => {
                    row[*col] -= a;
                    rhs -= &(a * upper);
                }
                VarMap::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
            }
        }
        let kind = match con.relation {
            Relation::Le => RowKind::Le,
            Relation::Ge => RowKind::Ge,
            Relation::Eq => RowKind::Eq,
        };
        rows.push((row, kind, rhs, Some(i)));
    }
    for (col, cap) in bound_rows {
        let mut row = vec![Rational::zero(); n_struct];
        row[col] = Rational::one();
        rows.push((row, RowKind::Le, cap, None));
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != RowKind::Eq).count();
    let total = n_struct + n_slack;
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    let mut origin = Vec::with_capacity(m);
    let mut sign = Vec::with_capacity(m);
    let mut slack = Vec::with_capacity(m);
    let mut kinds = Vec::with_capacity(m);
    let mut next_slack = n_struct;
    for (mut row, mut kind, mut rhs, orig) in rows {
        row.resize(total, Rational::zero());
        let mut s = Rational::one();
        if rhs.is_negative() {
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x = -x.clone();
                }
            }
            rhs = -rhs;
            s = -s;
            kind = match kind {
                RowKind::Le => RowKind::Ge,
                RowKind::Ge => RowKind::Le,
                RowKind::Eq => RowKind::Eq,
            };
        }
        let sc = match kind {
            RowKind::Le => {
                row[next_slack] = Rational::one();
                Some(next_slack)
            }
            RowKind::Ge => {
                row[next_slack] = -Rational::one();
                Some(next_slack)
            }
            RowKind::Eq => None,
        };
        if sc.is_some() {
            next_slack += 1;
        }
        a.push(row);
        b.push(rhs);
        origin.push(orig);
        sign.push(s);
        slack.push(sc);
        kinds.push(kind);
    }
    cost.resize(total, Rational::zero());
    Standard {
        a,
        b,
        cost,
        origin,
        sign,
        slack,
        kind: kinds,
        vars,
        ncols: total,
    }
}

struct Tableau {
    /// Rows over all columns (structural, slack, artificial) plus rhs last.
    t: Vec<Vec<Rational>>,
    /// Reduced costs, with `-z` in the last entry.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn set_cost(&mut self, cost: &[Rational]) {
        let w = self.width();
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.resize(w + 1, Rational::zero());
        for (row, &bv) in self.t.iter().zip(&self.basis) {
            let cb = obj[bv].clone();
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= &(&cb * x);
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = std::mem::take(&mut self.t[r]);
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        };
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.t[r] = prow;
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Bland's rule iterations over the `allowed` columns. Returns `false`
    /// when an improving column has no bounding row.
    fn run(&mut self, allowed: &[bool]) -> bool {
        let rhs = self.width();
        loop {
            let Some(c) = (0..rhs).find(|&j| allowed[j] && self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Duals `y` with `B^T y = c_B` for the current basis.
fn basis_duals(a: &[Vec<Rational>], basis: &[usize], cost: &[Rational]) -> Vec<Rational> {
    let m = basis.len();
    let bt: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&j| (0..m).map(|i| a[i][j].clone()).collect())
        .collect();
    let cb: Vec<Rational> = basis.iter().map(|&j| cost[j].clone()).collect();
    solve_square(&bt, &cb).expect("simplex basis is nonsingular")
}

/// Solves `p` exactly. Always returns a basic solution when one is optimal.
pub fn solve(p: &LpProblem) -> LpSolution {
    let std = standardize(p);
    let m = std.a.len();
    let n = std.ncols;

    // Crash basis: slack columns of `<=` rows, or a structural column that is
    // nonzero (and positive) only in that row. Other rows get artificials.
    let mut basis = vec![usize::MAX; m];
    let mut used = vec![false; n];
    for i in 0..m {
        if std.kind[i] == RowKind::Le {
            basis[i] = std.slack[i].unwrap();
            used[basis[i]] = true;
        }
    }
    #[allow(clippy::needless_range_loop)]
    for i in 0..m {
        if basis[i] != usize::MAX {
            continue;
        }
        let unit = (0..n).find(|&j| {
            !used[j] && std.a[i][j].is_positive() && (0..m).all(|k| k == i || std.a[k][j].is_zero())
        });
        if let Some(j) = unit {
            basis[i] = j;
            used[j] = true;
        }
    }
    let art_rows: Vec<usize> = (0..m).filter(|&i| basis[i] == usize::MAX).collect();
    let width = n + art_rows.len();
    let mut a_full: Vec<Vec<Rational>> = std.a.clone();
    for row in a_full.iter_mut() {
        row.resize(width, Rational::zero());
    }
    for (k, &i) in art_rows.iter().enumerate() {
        a_full[i][n + k] = Rational::one();
        basis[i] = n + k;
    }

    // Express every row in terms of its basic column.
    let mut t: Vec<Vec<Rational>> = a_full
        .iter()
        .zip(&std.b)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for i in 0..m {
        let piv = t[i][basis[i]].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for x in t[i].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
    }
    let mut tab = Tableau {
        t,
        obj: vec![Rational::zero(); width + 1],
        basis,
        pivots: 0,
    };
    let mut rows: Vec<usize> = (0..m).collect();

    if !art_rows.is_empty() {
        let mut phase1 = vec![Rational::zero(); width];
        for c in phase1.iter_mut().skip(n) {
            *c = Rational::one();
        }
        tab.set_cost(&phase1);
        let bounded = tab.run(&vec![true; width]);
        debug_assert!(bounded, "phase one is bounded below");
        if !tab.obj[width].is_zero() {
            let y = basis_duals(&a_full, &tab.basis, &phase1);
            let mut farkas = vec![Rational::zero(); p.constraints.len()];
            for (i, yi) in y.iter().enumerate() {
                if let Some(orig) = std.origin[i] {
                    farkas[orig] = yi * &std.sign[i];
                }
            }
            return LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective: Rational::zero(),
                duals: Vec::new(),
                reduced_costs: Vec::new(),
                basis_rows: Vec::new(),
                tight_rows: Vec::new(),
                farkas: Some(farkas),
                pivots: tab.pivots,
            };
        }
        // Drive remaining artificials out; rows where that is impossible are redundant.
        let mut r = 0;
        while r < tab.t.len() {
            if tab.basis[r] < n {
                r += 1;
                continue;
            }
            match (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                Some(j) => {
                    tab.pivot(r, j);
                    r += 1;
                }
                None => {
                    let origin = art_rows[tab.basis[r] - n];
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    rows.retain(|&i| i != origin);
                }
            }
        }
    }

    let mut cost = std.cost.clone();
    cost.resize(width, Rational::zero());
    tab.set_cost(&cost);
    let allowed: Vec<bool> = (0..width).map(|j| j < n).collect();
    if !tab.run(&allowed) {
        return LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: Rational::zero(),
            duals: Vec::new(),
            reduced_costs: Vec::new(),
            basis_rows: Vec::new(),
            tight_rows: Vec::new(),
            farkas: None,
            pivots: tab.pivots,
        };
    }

    let mut xs = vec![Rational::zero(); n];
    for (row, &bv) in tab.t.iter().zip(&tab.basis) {
        xs[bv] = row[width].clone();
    }
    let values: Vec<Rational> = std
        .vars
        .iter()
        .map(|vm| match vm {
            VarMap::Shift { col, lower } => lower + &xs[*col],
            VarMap::Mirror { col, upper } => upper - &xs[*col],
            VarMap::Split { pos, neg } => &xs[*pos] - &xs[*neg],
        })
        .collect();

    let kept_a: Vec<Vec<Rational>> = rows.iter().map(|&i| a_full[i].clone()).collect();
    let y_int = basis_duals(&kept_a, &tab.basis, &cost);
    let mut duals = vec![Rational::zero(); p.constraints.len()];
    for (k, &i) in rows.iter().enumerate() {
        if let Some(orig) = std.origin[i] {
            let v = &y_int[k] * &std.sign[i];
            duals[orig] = if p.sense == Sense::Maximize { -v } else { v };
        }
    }
    let reduced_costs = reduced_costs(p, &duals);

    let basic: std::collections::HashSet<usize> = tab.basis.iter().copied().collect();
    let basis_rows: Vec<usize> = rows
        .iter()
        .filter_map(|&i| {
            let orig = std.origin[i]?;
            match std.slack[i] {
                Some(s) if basic.contains(&s) => None,
                _ => Some(orig),
            }
        })
        .collect();
    let tight_rows = (0..p.constraints.len())
        .filter(|&i| p.constraints[i].is_tight(&values))
        .collect();

    LpSolution {
        status: LpStatus::Optimal,
        objective: p.objective_value(&values),
        values,
        duals,
        reduced_costs,
        basis_rows,
        tight_rows,
        farkas: None,
        pivots: tab.pivots,
    }
}

pub(super) fn reduced_costs(p: &LpProblem, duals: &[Rational]) -> Vec<Rational> {
    let mut d = p.objective.clone();
    for (con, y) in p.constraints.iter().zip(duals) {
        if y.is_zero() {
            continue;
        }
        for (j, a) in &con.terms {
            d[*j] -= &(a * y);
        }
    }
    d
}
