//! Dense SVD routines backed by `faer`.
//!
//! `Ψ̃` typically has large clusters of equal singular values, where the
//! nalgebra SVD loses accuracy; these helpers go through faer instead.

use faer::Mat;
use nalgebra::{DMatrix, DVector};

fn to_faer(a: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Singular values in non-increasing order.
pub(crate) fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    to_faer(a).singular_values().expect("SVD converges for finite input")
}

/// Minimum-norm least-squares solution `A⁺ b`, treating singular values at or
/// below `rel_tol · σ_max` as zero. Returns the solution and the numerical rank.
pub(crate) fn pinv_solve(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> (DVector<f64>, usize) {
    let svd = to_faer(a).thin_svd().expect("SVD converges for finite input");
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let smax = (0..s.nrows()).map(|i| s[i]).fold(0.0, f64::max);
    let mut x = DVector::zeros(a.ncols());
    let mut rank = 0;
    for k in 0..s.nrows() {
        if s[k] <= rel_tol * smax || s[k] == 0.0 {
            continue;
        }
        rank += 1;
        let coef = (0..a.nrows()).map(|i| u[(i, k)] * b[i]).sum::<f64>() / s[k];
        for j in 0..a.ncols() {
            x[j] += coef * v[(j, k)];
        }
    }
    (x, rank)
}
