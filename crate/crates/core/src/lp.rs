//! Revised simplex for packing LPs: maximise `c·x` subject to `A x <= b`,
//! `x >= 0`, with `A >= 0` and `b >= 0`, so the slack basis is feasible.
//!
//! Columns are sparse. Pricing is Dantzig's rule; after a run of degenerate
//! pivots it switches to Bland's rule, which cannot cycle. Over the rational
//! scalars the result is exact.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct PackingLp<T> {
    pub rows: usize,
    pub rhs: Vec<T>,
    /// Sparse columns as `(row, coefficient)` lists.
    pub columns: Vec<Vec<(usize, T)>>,
    pub cost: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub objective: T,
    pub x: Vec<T>,
    /// Optimal dual prices, one per row.
    pub duals: Vec<T>,
    pub pivots: usize,
}

pub const MAX_PIVOTS: usize = 100_000;
const DEGENERATE_RUN: usize = 50;

impl<T: Scalar> PackingLp<T> {
    pub fn new(rhs: Vec<T>) -> Self {
        PackingLp { rows: rhs.len(), rhs, columns: Vec::new(), cost: Vec::new() }
    }

    pub fn push_column(&mut self, col: Vec<(usize, T)>, cost: T) -> usize {
        self.columns.push(col);
        self.cost.push(cost);
        self.columns.len() - 1
    }

    fn check(&self) -> Result<()> {
        if self.rhs.len() != self.rows || self.cost.len() != self.columns.len() {
            return Err(Error::InvalidParameters("inconsistent LP dimensions".into()));
        }
        if self.rhs.iter().any(|b| b.is_negative()) {
            return Err(Error::InvalidParameters("negative right-hand side".into()));
        }
        for col in &self.columns {
            for (r, a) in col {
                if *r >= self.rows || a.is_negative() {
                    return Err(Error::InvalidParameters("packing column with a bad entry".into()));
                }
            }
        }
        Ok(())
    }

    /// `A_j · y` for structural `j`, or `y_i` for the slack of row `i`.
    fn dot(&self, j: usize, y: &[T]) -> T {
        let n = self.columns.len();
        if j >= n {
            return y[j - n].clone();
        }
        self.columns[j].iter().fold(T::zero(), |acc, (r, a)| acc + a.clone() * y[*r].clone())
    }

    fn cost_of(&self, j: usize) -> T {
        self.cost.get(j).cloned().unwrap_or_else(T::zero)
    }

    /// `B^{-1} A_j`.
    fn ftran(&self, binv: &[Vec<T>], j: usize) -> Vec<T> {
        let n = self.columns.len();
        let m = self.rows;
        let mut u = vec![T::zero(); m];
        if j >= n {
            for (i, ui) in u.iter_mut().enumerate() {
                *ui = binv[i][j - n].clone();
            }
            return u;
        }
        for (r, a) in &self.columns[j] {
            if a.is_zero() {
                continue;
            }
            for (i, ui) in u.iter_mut().enumerate() {
                let b = &binv[i][*r];
                if !b.is_zero() {
                    *ui = ui.clone() + b.clone() * a.clone();
                }
            }
        }
        u
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        self.check()?;
        let m = self.rows;
        let n = self.columns.len();
        let tol = T::tolerance();
        let mut binv: Vec<Vec<T>> =
            (0..m).map(|i| (0..m).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut in_basis = vec![false; n + m];
        for &b in &basis {
            in_basis[b] = true;
        }
        let mut xb = self.rhs.clone();
        let mut pivots = 0usize;
        let mut degenerate = 0usize;

        loop {
            // y = c_B^T B^{-1}
            let mut y = vec![T::zero(); m];
            for (i, &bv) in basis.iter().enumerate() {
                let c = self.cost_of(bv);
                if c.is_zero() {
                    continue;
                }
                for (yj, bij) in y.iter_mut().zip(&binv[i]) {
                    *yj = yj.clone() + c.clone() * bij.clone();
                }
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let mut entering: Option<(usize, T)> = None;
            for j in 0..n + m {
                if in_basis[j] {
                    continue;
                }
                let d = self.cost_of(j) - self.dot(j, &y);
                if d <= tol {
                    continue;
                }
                match &entering {
                    _ if bland => {
                        entering = Some((j, d));
                        break;
                    }
                    Some((_, best)) if d <= *best => {}
                    _ => entering = Some((j, d)),
                }
            }
            let Some((enter, _)) = entering else {
                let mut x = vec![T::zero(); n];
                for (i, &bv) in basis.iter().enumerate() {
                    if bv < n {
                        x[bv] = xb[i].clone();
                    }
                }
                let objective = x
                    .iter()
                    .zip(&self.cost)
                    .fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
                return Ok(LpSolution { objective, x, duals: y, pivots });
            };

            let u = self.ftran(&binv, enter);
            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                if u[i] <= tol {
                    continue;
                }
                let ratio = xb[i].clone() / u[i].clone();
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < best.clone() - tol.clone()
                            || (ratio.approx_eq(best) && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, step)) = leave else {
                return Err(Error::InvalidParameters(format!("LP unbounded along column {enter}")));
            };
            if step <= tol {
                degenerate += 1;
            } else {
                degenerate = 0;
            }

            let pivot = u[r].clone();
            for v in binv[r].iter_mut() {
                *v = v.clone() / pivot.clone();
            }
            xb[r] = xb[r].clone() / pivot.clone();
            let row_r = binv[r].clone();
            let xr = xb[r].clone();
            for i in 0..m {
                if i == r || u[i].is_zero() {
                    continue;
                }
                let f = u[i].clone();
                for (v, rr) in binv[i].iter_mut().zip(&row_r) {
                    if !rr.is_zero() {
                        *v = v.clone() - f.clone() * rr.clone();
                    }
                }
                xb[i] = xb[i].clone() - f * xr.clone();
                if xb[i].is_negative() && xb[i].abs() <= tol {
                    xb[i] = T::zero();
                }
            }
            in_basis[basis[r]] = false;
            in_basis[enter] = true;
            basis[r] = enter;
            pivots += 1;
            if pivots > MAX_PIVOTS {
                return Err(Error::CapExceeded { what: "simplex pivots", got: pivots, cap: MAX_PIVOTS });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn small_exact_optimum() {
        // max x + y, x + 2y <= 4, 3x + y <= 6  ->  x = 8/5, y = 6/5
        let mut lp = PackingLp::new(vec![r(4, 1), r(6, 1)]);
        lp.push_column(vec![(0, r(1, 1)), (1, r(3, 1))], r(1, 1));
        lp.push_column(vec![(0, r(2, 1)), (1, r(1, 1))], r(1, 1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, r(14, 5));
        assert_eq!(sol.x, vec![r(8, 5), r(6, 5)]);
        // dual certificate
        let dual: Rational = sol.duals.iter().zip(&lp.rhs).map(|(y, b)| y * b).sum();
        assert_eq!(dual, sol.objective);
    }

    #[test]
    fn empty_lp_is_zero() {
        let lp: PackingLp<f64> = PackingLp::new(vec![1.0; 3]);
        assert_eq!(lp.solve().unwrap().objective, 0.0);
    }

    #[test]
    fn degenerate_columns_terminate() {
        // many identical columns all hitting the same rows
        let mut lp = PackingLp::new(vec![r(1, 1); 4]);
        for _ in 0..30 {
            lp.push_column(vec![(0, r(1, 1)), (1, r(1, 1))], r(2, 1));
            lp.push_column(vec![(2, r(1, 1)), (3, r(1, 1))], r(2, 1));
            lp.push_column(vec![(0, r(1, 1)), (3, r(1, 1))], r(2, 1));
        }
        assert_eq!(lp.solve().unwrap().objective, r(4, 1));
    }
}
