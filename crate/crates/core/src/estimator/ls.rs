use nalgebra::DVector;

use super::{check_shape, residual, CorrelationVector, SolverMethod, SolverReport};
use crate::error::{Error, Result};
use crate::linalg::pinv_solve;
use crate::patterns::RANK_TOLERANCE;
use crate::system::{MeasurementSystem, PsdEstimate};

/// Least-squares (noncompressive) estimate `Ψ̃⁺ ũ` through the SVD of `Ψ̃`.
///
/// Entries may come out negative; no clipping is applied.
pub fn solve_ls(system: &MeasurementSystem, u: &CorrelationVector) -> Result<SolverReport> {
    check_shape(system, u)?;
    let a = system.psi_tilde();
    let cols = a.ncols();
    let (v, rank) = pinv_solve(a, &u.stacked, RANK_TOLERANCE);
    if rank < cols {
        return Err(Error::RankDeficient { rank, columns: cols });
    }
    let v = if u.is_zero() { DVector::zeros(cols) } else { v };
    Ok(SolverReport {
        residual_norm: residual(system, u, &v),
        estimate: PsdEstimate::new(v.iter().copied().collect(), 1.0),
        method: SolverMethod::Ls,
        iterations: None,
        active_set_size: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::golomb_ruler;
    use crate::system::SamplingPattern;

    #[test]
    fn recovers_exact_data() {
        let p = SamplingPattern::new(64, golomb_ruler(10).unwrap().marks).unwrap();
        let sys = MeasurementSystem::new(&p);
        let v: Vec<f64> = (0..64).map(|i| ((i * 37) % 11) as f64 * 0.1).collect();
        let r = solve_ls(&sys, &CorrelationVector::exact(&sys, &v)).unwrap();
        let err = r.estimate.values().iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "max err {err}");
        assert!(r.residual_norm < 1e-9);

        let flat = solve_ls(&sys, &CorrelationVector::exact(&sys, &[0.7; 64])).unwrap();
        assert!(flat.estimate.values().iter().all(|&x| (x - 0.7).abs() < 1e-10));
    }

    #[test]
    fn rejects_rank_deficient() {
        let p = SamplingPattern::new(64, vec![0, 5, 9]).unwrap();
        let sys = MeasurementSystem::new(&p);
        let u = CorrelationVector::exact(&sys, &[1.0; 64]);
        assert!(matches!(solve_ls(&sys, &u), Err(Error::RankDeficient { columns: 64, .. })));
    }

    #[test]
    fn zero_data_gives_zero() {
        let p = SamplingPattern::new(8, vec![0, 1, 3, 7]).unwrap();
        let sys = MeasurementSystem::new(&p);
        let r = solve_ls(&sys, &CorrelationVector::exact(&sys, &[0.0; 8])).unwrap();
        assert!(r.estimate.values().iter().all(|&x| x == 0.0));
    }
}
