//! Small dense helpers over `f64` slices.

use nalgebra::{DMatrix, DVector};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `y += s * x`
#[inline]
pub fn axpy(s: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// Solves `min ||X w - y||^2 + alpha ||w||^2`.
///
/// `alpha = 0` returns the minimum-norm least-squares solution.
pub fn ridge_solve(x: &[Vec<f64>], y: &[f64], alpha: f64) -> Vec<f64> {
    let n = x.len();
    let d = x.first().map_or(0, Vec::len);
    if n == 0 || d == 0 {
        return vec![0.0; d];
    }
    let xm = DMatrix::from_fn(n, d, |i, j| x[i][j]);
    let yv = DVector::from_column_slice(y);
    if alpha > 0.0 {
        let mut gram = xm.transpose() * &xm;
        for j in 0..d {
            gram[(j, j)] += alpha;
        }
        let rhs = xm.transpose() * &yv;
        if let Some(ch) = gram.clone().cholesky() {
            return ch.solve(&rhs).iter().copied().collect();
        }
        if let Some(sol) = gram.lu().solve(&rhs) {
            return sol.iter().copied().collect();
        }
    }
    let svd = xm.svd(true, true);
    let tol = f64::EPSILON * n.max(d) as f64 * svd.singular_values.max();
    svd.solve(&yv, tol)
        .map(|s| s.iter().copied().collect())
        .unwrap_or_else(|_| vec![0.0; d])
}
