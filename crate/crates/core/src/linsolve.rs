//! Complex banded linear solvers for the implicit time steps.
//!
//! The Crank-Nicolson matrices here are tridiagonal except for one extra
//! entry produced by the second-order one-sided boundary stencil in the last
//! row; `bordered_solve` folds that entry away and falls back to Thomas.

use crate::error::{Result, SimError};
use num_complex::Complex64 as C64;

/// Tridiagonal coefficient matrix: `lower` and `upper` have length `n - 1`.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem {
    pub lower: Vec<C64>,
    pub diag: Vec<C64>,
    pub upper: Vec<C64>,
}

impl TridiagonalSystem {
    pub fn new(lower: Vec<C64>, diag: Vec<C64>, upper: Vec<C64>) -> Self {
        assert_eq!(lower.len() + 1, diag.len());
        assert_eq!(upper.len() + 1, diag.len());
        Self { lower, diag, upper }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Matrix-vector product, for residual checks.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.size();
        let mut y = vec![C64::default(); n];
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.upper[i] * x[i + 1];
            }
            y[i] = v;
        }
        y
    }

    fn pivot_scale(&self) -> f64 {
        let mx = |v: &[C64]| v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        mx(&self.diag).max(mx(&self.lower)).max(mx(&self.upper))
    }
}

fn check_pivot(p: C64, scale: f64, row: usize) -> Result<()> {
    if p.norm() <= 1e-14 * scale {
        Err(SimError::ZeroPivot(row))
    } else {
        Ok(())
    }
}

/// Thomas algorithm. No pivoting; a near-zero pivot surfaces as `ZeroPivot`
/// so the caller can switch to `dense_solve`.
pub fn thomas_solve(sys: &TridiagonalSystem, rhs: &[C64]) -> Result<Vec<C64>> {
    let n = sys.size();
    assert_eq!(rhs.len(), n);
    let scale = sys.pivot_scale();
    let mut d = sys.diag.clone();
    let mut b = rhs.to_vec();
    for i in 1..n {
        check_pivot(d[i - 1], scale, i - 1)?;
        let f = sys.lower[i - 1] / d[i - 1];
        d[i] -= f * sys.upper[i - 1];
        let prev = b[i - 1];
        b[i] -= f * prev;
    }
    check_pivot(d[n - 1], scale, n - 1)?;
    let mut x = vec![C64::default(); n];
    x[n - 1] = b[n - 1] / d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (b[i] - sys.upper[i] * x[i + 1]) / d[i];
    }
    Ok(x)
}

/// Solves the tridiagonal system augmented with one extra entry in the last
/// row at column `n - 3` (the reach of the 3-point one-sided boundary
/// stencil). The extra entry is eliminated against the already-reduced rows
/// `n-3` and `n-2`, then back substitution proceeds as in Thomas.
pub fn bordered_solve(sys: &TridiagonalSystem, extra: C64, rhs: &[C64]) -> Result<Vec<C64>> {
    let n = sys.size();
    assert!(n >= 4, "bordered system needs at least 4 rows");
    assert_eq!(rhs.len(), n);
    if extra == C64::default() {
        return thomas_solve(sys, rhs);
    }
    let scale = sys.pivot_scale().max(extra.norm());
    let mut d = sys.diag.clone();
    let mut b = rhs.to_vec();
    // Forward elimination of rows 1..n-1 (the last row is handled apart).
    for i in 1..n - 1 {
        check_pivot(d[i - 1], scale, i - 1)?;
        let f = sys.lower[i - 1] / d[i - 1];
        d[i] -= f * sys.upper[i - 1];
        let prev = b[i - 1];
        b[i] -= f * prev;
    }
    // Last row: entries at columns n-3 (extra), n-2 (lower), n-1 (diag).
    check_pivot(d[n - 3], scale, n - 3)?;
    let f3 = extra / d[n - 3];
    let a2 = sys.lower[n - 2] - f3 * sys.upper[n - 3];
    let mut b_last = b[n - 1] - f3 * b[n - 3];
    check_pivot(d[n - 2], scale, n - 2)?;
    let f2 = a2 / d[n - 2];
    let a1 = sys.diag[n - 1] - f2 * sys.upper[n - 2];
    b_last -= f2 * b[n - 2];
    check_pivot(a1, scale, n - 1)?;
    let mut x = vec![C64::default(); n];
    x[n - 1] = b_last / a1;
    for i in (0..n - 1).rev() {
        x[i] = (b[i] - sys.upper[i] * x[i + 1]) / d[i];
    }
    Ok(x)
}

/// Dense Gaussian elimination with partial pivoting. Fallback path for the
/// rare parameter corners where Thomas hits a zero pivot.
pub fn dense_solve(a: &mut Vec<Vec<C64>>, rhs: &[C64]) -> Result<Vec<C64>> {
    let n = rhs.len();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let (piv, mag) = (k..n)
            .map(|i| (i, a[i][k].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag == 0.0 {
            return Err(SimError::ZeroPivot(k));
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let akj = a[k][j];
                a[i][j] -= f * akj;
            }
            let bk = b[k];
            b[i] -= f * bk;
        }
    }
    let mut x = vec![C64::default(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Ok(x)
}

/// Densifies a tridiagonal system plus optional bordered entry, for the
/// fallback path and for oracle comparisons.
pub fn to_dense(sys: &TridiagonalSystem, extra: Option<C64>) -> Vec<Vec<C64>> {
    let n = sys.size();
    let mut a = vec![vec![C64::default(); n]; n];
    for i in 0..n {
        a[i][i] = sys.diag[i];
        if i > 0 {
            a[i][i - 1] = sys.lower[i - 1];
        }
        if i + 1 < n {
            a[i][i + 1] = sys.upper[i];
        }
    }
    if let Some(e) = extra {
        a[n - 1][n - 3] += e;
    }
    a
}
