//! Lawson–Hanson active-set non-negative least squares.

use nalgebra::{DMatrix, DVector};

use super::{check_shape, residual, CorrelationVector, SolverMethod, SolverReport};
use crate::error::{Error, Result};
use crate::linalg::pinv_solve;
use crate::system::{MeasurementSystem, PsdEstimate};

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsOutcome {
    pub x: DVector<f64>,
    pub iterations: usize,
    pub passive: usize,
}

/// Compressive estimate: `argmin ‖Ψ̃ α - ũ‖₂` subject to `α >= 0`.
///
/// Works for both over- and underdetermined systems. The iteration cap is
/// `10 L` outer iterations.
pub fn solve_nnls(system: &MeasurementSystem, u: &CorrelationVector) -> Result<SolverReport> {
    check_shape(system, u)?;
    let a = system.psi_tilde();
    let cols = a.ncols();
    let outcome = if u.is_zero() {
        NnlsOutcome { x: DVector::zeros(cols), iterations: 0, passive: 0 }
    } else if a.nrows() > cols {
        // ‖Aα - b‖² = ‖Rα - Qᵀb‖² + const for A = QR, so iterate on the L×L factor
        let qr = a.clone().qr();
        let qtb = qr.q().transpose() * &u.stacked;
        let r = qr.r();
        let dual_tol = 1e-10 * (a.transpose() * &u.stacked).amax();
        solve_nnls_with_tol(&r, &qtb, dual_tol, 10 * cols)?
    } else {
        solve_nnls_matrix(a, &u.stacked, 10 * cols)?
    };
    Ok(SolverReport {
        residual_norm: residual(system, u, &outcome.x),
        estimate: PsdEstimate::new(outcome.x.iter().copied().collect(), 1.0),
        method: SolverMethod::Nnls,
        iterations: Some(outcome.iterations),
        active_set_size: Some(outcome.passive),
    })
}

/// NNLS on an arbitrary dense system with dual tolerance `1e-10 ‖Aᵀb‖_∞`.
pub fn solve_nnls_matrix(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> Result<NnlsOutcome> {
    if a.nrows() != b.len() {
        return Err(Error::LengthMismatch { expected: a.nrows(), actual: b.len() });
    }
    let dual_tol = 1e-10 * (a.transpose() * b).amax();
    solve_nnls_with_tol(a, b, dual_tol, max_iter)
}

/// Unconstrained least squares restricted to the columns in `passive`,
/// scattered back to full length.
fn passive_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(passive);
    let (s, _) = pinv_solve(&sub, b, 1e-13);
    let mut full = DVector::zeros(a.ncols());
    for (k, &j) in passive.iter().enumerate() {
        full[j] = s[k];
    }
    full
}

fn solve_nnls_with_tol(a: &DMatrix<f64>, b: &DVector<f64>, dual_tol: f64, max_iter: usize) -> Result<NnlsOutcome> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut in_passive = vec![false; n];
    // columns that were admitted and immediately rejected since the last progress step
    let mut blocked = vec![false; n];
    let mut iterations = 0;

    loop {
        let w = a.transpose() * (b - a * &x);
        // most positive dual among constrained variables, lowest index on ties
        let mut best: Option<usize> = None;
        for j in 0..n {
            if in_passive[j] || blocked[j] || w[j] <= dual_tol {
                continue;
            }
            if best.is_none_or(|k| w[j] > w[k]) {
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::MaxIterationsExceeded(max_iter));
        }
        in_passive[j] = true;

        let mut progressed = false;
        loop {
            let passive: Vec<usize> = (0..n).filter(|&i| in_passive[i]).collect();
            let z = passive_lstsq(a, b, &passive);
            if passive.iter().all(|&i| z[i] > 0.0) {
                x = z;
                progressed = true;
                break;
            }
            // step toward z until the first passive variable hits zero
            let mut alpha = f64::INFINITY;
            let mut leaving = passive[0];
            for &i in &passive {
                if z[i] <= 0.0 {
                    let t = x[i] / (x[i] - z[i]);
                    if t < alpha {
                        alpha = t;
                        leaving = i;
                    }
                }
            }
            if alpha > 0.0 {
                progressed = true;
            }
            for &i in &passive {
                x[i] += alpha * (z[i] - x[i]);
            }
            x[leaving] = 0.0;
            for &i in &passive {
                if x[i] <= 0.0 {
                    x[i] = 0.0;
                    in_passive[i] = false;
                }
            }
            if !in_passive.iter().any(|&p| p) {
                break;
            }
        }
        if progressed {
            blocked.iter_mut().for_each(|b| *b = false);
        } else {
            blocked[j] = true;
        }
    }
    let passive = in_passive.iter().filter(|&&p| p).count();
    Ok(NnlsOutcome { x, iterations, passive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SamplingPattern;

    #[test]
    fn textbook_problem() {
        // min ‖Ax - b‖ s.t. x >= 0; unconstrained optimum has a negative entry
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_vec(vec![2.0, -1.0, 1.0]);
        let out = solve_nnls_matrix(&a, &b, 20).unwrap();
        // with x1 = 0 the problem is min (x0-2)² + 1 + (x0-1)² -> x0 = 1.5
        assert!((out.x[0] - 1.5).abs() < 1e-12);
        assert_eq!(out.x[1], 0.0);
        assert_eq!(out.passive, 1);
    }

    #[test]
    fn zero_data() {
        let p = SamplingPattern::new(16, vec![0, 1, 3]).unwrap();
        let sys = MeasurementSystem::new(&p);
        let r = solve_nnls(&sys, &CorrelationVector::exact(&sys, &[0.0; 16])).unwrap();
        assert!(r.estimate.values().iter().all(|&v| v == 0.0));
        assert_eq!(r.iterations, Some(0));
    }

    #[test]
    fn sparse_recovery_with_ruler7() {
        let p = SamplingPattern::new(128, vec![1, 3, 4, 11, 17, 22, 26]).unwrap();
        let sys = MeasurementSystem::new(&p);
        let mut v = vec![0.0; 128];
        for (k, idx) in [3usize, 17, 40, 41, 42, 70, 71, 90, 100, 110, 120, 127].iter().enumerate() {
            v[*idx] = 0.5 + 0.1 * k as f64;
        }
        let r = solve_nnls(&sys, &CorrelationVector::exact(&sys, &v)).unwrap();
        let err = r.estimate.values().iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "max err {err}");
    }

    #[test]
    fn overdetermined_matches_ls_when_feasible() {
        let p = SamplingPattern::new(16, vec![0, 1, 2, 8, 13]).unwrap();
        let sys = MeasurementSystem::new(&p);
        let v: Vec<f64> = (0..16).map(|i| 0.1 + (i % 5) as f64 * 0.2).collect();
        let r = solve_nnls(&sys, &CorrelationVector::exact(&sys, &v)).unwrap();
        let err = r.estimate.values().iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "max err {err}");
    }
}
