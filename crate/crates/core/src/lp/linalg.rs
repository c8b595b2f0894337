//! Exact Gaussian elimination helpers.

use crate::rational::Rational;

/// Incrementally built row echelon basis; answers "is this row independent
/// of the rows accepted so far?".
#[derive(Debug, Clone)]
pub struct RowSpan {
    width: usize,
    /// Reduced rows, each with a distinct pivot column whose entry is 1.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowSpan {
    pub fn new(width: usize) -> Self {
        RowSpan {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &[Rational]) -> Vec<Rational> {
        let mut r = row.to_vec();
        for (pivot, basis) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let f = r[*pivot].clone();
            for (x, b) in r.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *x -= &(&f * b);
                }
            }
        }
        r
    }

    pub fn is_independent(&self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.width);
        self.reduce(row).iter().any(|x| !x.is_zero())
    }

    /// Adds `row` if it is independent; returns whether it was added.
    pub fn insert(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.width);
        let mut r = self.reduce(row);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // Keep existing rows fully reduced against the new pivot.
        for (_, basis) in self.rows.iter_mut() {
            if basis[pivot].is_zero() {
                continue;
            }
            let f = basis[pivot].clone();
            for (b, x) in basis.iter_mut().zip(&r) {
                if !x.is_zero() {
                    *b -= &(&f * x);
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut span = RowSpan::new(first.len());
    for r in rows {
        span.insert(r);
    }
    span.rank()
}

/// Solves the square system `a x = b`; `None` if `a` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}
