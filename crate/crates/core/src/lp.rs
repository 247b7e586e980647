//! Dense linear programs with few free variables and many inequality rows.
//!
//! Solves `min c·u  s.t.  A u ≥ b` with `u ∈ ℝ^d` unrestricted. The solver works
//! on the dual `max b·λ  s.t.  Aᵀλ = c, λ ≥ 0`, which has only `d` equality
//! rows, with a two-phase revised simplex that refactorizes the `d × d` basis
//! on every pivot. The primal solution is read off the optimal simplex
//! multipliers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Reduced costs below this are treated as non-improving.
const COST_TOL: f64 = 1e-11;
/// Pivot elements below this are treated as zero.
const PIVOT_TOL: f64 = 1e-11;
/// Phase-one residual above which the dual is declared infeasible.
const FEAS_TOL: f64 = 1e-9;
/// Degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub u: Vec<f64>,
    pub objective: f64,
}

/// `rows` holds `A` row-major with `d` columns; `b` has one entry per row.
pub fn minimize_free(rows: &[f64], d: usize, b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = b.len();
    if d == 0 || rows.len() != m * d || c.len() != d {
        return Err(Error::InvalidParameter("inconsistent LP dimensions"));
    }
    let sign: Vec<f64> = c.iter().map(|&x| if x < 0.0 { -1.0 } else { 1.0 }).collect();
    let rhs: Vec<f64> = c.iter().map(|x| x.abs()).collect();
    let mut dual = Dual {
        rows,
        d,
        m,
        sign: &sign,
        rhs: &rhs,
        basis: (m..m + d).collect(),
    };

    // Phase one: maximize minus the sum of artificials.
    let phase_one = |j: usize| if j >= m { -1.0 } else { 0.0 };
    match dual.run(&phase_one, true)? {
        Outcome::Optimal => {}
        Outcome::Unbounded => return Err(Error::NumericalFailure("phase one unbounded")),
    }
    let x = dual.basic_values()?;
    let residual: f64 = dual
        .basis
        .iter()
        .zip(&x)
        .filter(|(&j, _)| j >= m)
        .map(|(_, v)| v)
        .sum();
    if residual > FEAS_TOL * (1.0 + rhs.iter().sum::<f64>()) {
        return Err(Error::Infeasible);
    }
    dual.drive_out_artificials()?;

    let phase_two = |j: usize| if j >= m { f64::NEG_INFINITY } else { b[j] };
    match dual.run(&phase_two, false)? {
        Outcome::Optimal => {}
        Outcome::Unbounded => return Err(Error::Infeasible),
    }
    let costs: Vec<f64> = dual.basis.iter().map(|&j| b[j]).collect();
    let pi = dual.solve_transposed(&costs)?;
    let u: Vec<f64> = pi.iter().zip(&sign).map(|(p, s)| p * s).collect();
    let objective = u.iter().zip(c).map(|(a, b)| a * b).sum();
    Ok(LpSolution { u, objective })
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Dual<'a> {
    rows: &'a [f64],
    d: usize,
    m: usize,
    sign: &'a [f64],
    rhs: &'a [f64],
    basis: Vec<usize>,
}

impl Dual<'_> {
    /// Column `j` of the sign-adjusted constraint matrix `Aᵀ` (artificials are unit columns).
    fn column(&self, j: usize, out: &mut [f64]) {
        if j >= self.m {
            out.fill(0.0);
            out[j - self.m] = 1.0;
        } else {
            let row = &self.rows[j * self.d..(j + 1) * self.d];
            for k in 0..self.d {
                out[k] = self.sign[k] * row[k];
            }
        }
    }

    fn basis_matrix(&self) -> Vec<f64> {
        let d = self.d;
        let mut mat = vec![0.0; d * d];
        let mut col = vec![0.0; d];
        for (pos, &j) in self.basis.iter().enumerate() {
            self.column(j, &mut col);
            for k in 0..d {
                mat[k * d + pos] = col[k];
            }
        }
        mat
    }

    fn basic_values(&self) -> Result<Vec<f64>> {
        solve(self.basis_matrix(), self.d, self.rhs.to_vec())
    }

    fn solve_direct(&self, v: &[f64]) -> Result<Vec<f64>> {
        solve(self.basis_matrix(), self.d, v.to_vec())
    }

    fn solve_transposed(&self, v: &[f64]) -> Result<Vec<f64>> {
        let d = self.d;
        let mat = self.basis_matrix();
        let mut t = vec![0.0; d * d];
        for r in 0..d {
            for c in 0..d {
                t[c * d + r] = mat[r * d + c];
            }
        }
        solve(t, d, v.to_vec())
    }

    fn run(&mut self, cost: &dyn Fn(usize) -> f64, allow_artificial: bool) -> Result<Outcome> {
        let (d, m) = (self.d, self.m);
        let limit = 50 * (m + d) + 1000;
        let mut degenerate = 0usize;
        let mut col = vec![0.0; d];
        for _ in 0..limit {
            let x = self.basic_values()?;
            let cb: Vec<f64> = self.basis.iter().map(|&j| cost(j)).collect();
            let pi = self.solve_transposed(&cb)?;
            let bland = degenerate > DEGENERATE_LIMIT;
            let mut entering = None;
            let mut best = COST_TOL;
            let candidates = if allow_artificial { m + d } else { m };
            for j in 0..candidates {
                if self.basis.contains(&j) {
                    continue;
                }
                self.column(j, &mut col);
                let reduced = cost(j) - pi.iter().zip(&col).map(|(a, b)| a * b).sum::<f64>();
                if reduced > best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = reduced;
                }
            }
            let Some(j) = entering else {
                return Ok(Outcome::Optimal);
            };
            self.column(j, &mut col);
            let dir = self.solve_direct(&col)?;
            let mut leave: Option<(usize, f64)> = None;
            for pos in 0..d {
                if dir[pos] > PIVOT_TOL {
                    let ratio = x[pos].max(0.0) / dir[pos];
                    let better = match leave {
                        None => true,
                        Some((lp, lr)) => {
                            ratio < lr - 1e-15 || (ratio <= lr + 1e-15 && self.basis[pos] < self.basis[lp])
                        }
                    };
                    if better {
                        leave = Some((pos, ratio));
                    }
                }
            }
            let Some((pos, ratio)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            if ratio <= 1e-15 {
                degenerate += 1;
            }
            self.basis[pos] = j;
        }
        Err(Error::NumericalFailure("simplex iteration limit"))
    }

    /// Pivots zero-level artificials out of the basis after phase one.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let (d, m) = (self.d, self.m);
        let mut col = vec![0.0; d];
        for pos in 0..d {
            if self.basis[pos] < m {
                continue;
            }
            let mut replaced = false;
            for j in 0..m {
                if self.basis.contains(&j) {
                    continue;
                }
                self.column(j, &mut col);
                let dir = self.solve_direct(&col)?;
                if dir[pos].abs() > 1e-9 {
                    self.basis[pos] = j;
                    replaced = true;
                    break;
                }
            }
            if !replaced {
                return Err(Error::NumericalFailure("constraint matrix is rank deficient"));
            }
        }
        Ok(())
    }
}

/// Gaussian elimination with partial pivoting on a row-major `d × d` system.
fn solve(mut a: Vec<f64>, d: usize, mut b: Vec<f64>) -> Result<Vec<f64>> {
    for k in 0..d {
        let (p, max) = (k..d)
            .map(|r| (r, a[r * d + k].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if max < 1e-14 {
            return Err(Error::NumericalFailure("singular basis"));
        }
        if p != k {
            for c in 0..d {
                a.swap(k * d + c, p * d + c);
            }
            b.swap(k, p);
        }
        for r in k + 1..d {
            let f = a[r * d + k] / a[k * d + k];
            if f != 0.0 {
                for c in k..d {
                    a[r * d + c] -= f * a[k * d + c];
                }
                b[r] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0; d];
    for k in (0..d).rev() {
        let s: f64 = (k + 1..d).map(|c| a[k * d + c] * x[c]).sum();
        x[k] = (b[k] - s) / a[k * d + k];
    }
    Ok(x)
}
