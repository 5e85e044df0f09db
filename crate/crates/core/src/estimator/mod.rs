//! Correlation measurements and subband-power recovery.

mod diagnostics;
mod ls;
mod nnls;

pub use diagnostics::{predict_bias, predict_cross_variance, predict_variance, LagSequence};
pub use ls::solve_ls;
pub use nnls::{solve_nnls, solve_nnls_matrix, NnlsOutcome};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::DelayedSampleSet;
use crate::system::{MeasurementSystem, PairEntry, PairOrdering, PsdEstimate};

/// Lag-0 correlations in the row order of a [`PairOrdering`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationVector {
    /// One complex value per ordering entry; entry 0 is the equal-channel average.
    pub raw: Vec<Complex64>,
    /// `[Re(raw); Im(raw[1..])]`, aligned with the rows of `Ψ̃`.
    pub stacked: DVector<f64>,
}

impl CorrelationVector {
    pub fn from_raw(raw: Vec<Complex64>) -> Self {
        let stacked = DVector::from_iterator(
            2 * raw.len() - 1,
            raw.iter().map(|c| c.re).chain(raw.iter().skip(1).map(|c| c.im)),
        );
        CorrelationVector { raw, stacked }
    }

    /// Noise-free measurements `Ψ v` of a known subband-power vector.
    pub fn exact(system: &MeasurementSystem, v: &[f64]) -> Self {
        let v = DVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0)));
        let u = system.psi() * v;
        Self::from_raw(u.iter().copied().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.stacked.iter().all(|&x| x == 0.0)
    }
}

fn lag0(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64
}

/// Sample lag-0 correlations `(1/M) Σ z_a(n) z_b(n)` for every cross pair; the
/// equal entry averages the `q` channel autocorrelations.
pub fn assemble_u(set: &DelayedSampleSet, ordering: &PairOrdering) -> Result<CorrelationVector> {
    let m = set.m();
    if m < 2 {
        return Err(Error::InsufficientSignal { required: 2, available: m });
    }
    let q = set.z.len();
    let raw = ordering
        .entries()
        .iter()
        .map(|entry| match *entry {
            PairEntry::Equal => {
                let sum: f64 = set.z.iter().map(|z| lag0(z, z)).sum();
                Ok(Complex64::new(sum / q as f64, 0.0))
            }
            PairEntry::Cross { a, b } if a < q && b < q => Ok(Complex64::new(lag0(&set.z[a], &set.z[b]), 0.0)),
            PairEntry::Cross { a, b } => Err(Error::InvalidPattern(format!(
                "pair ({a}, {b}) refers to a channel beyond the {q} available"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationVector::from_raw(raw))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    Ls,
    Nnls,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub estimate: PsdEstimate,
    pub method: SolverMethod,
    /// `‖Ψ̃ v̂ - ũ‖₂`.
    pub residual_norm: f64,
    /// Outer NNLS iterations.
    pub iterations: Option<usize>,
    /// Number of unconstrained (strictly positive) NNLS variables at exit.
    pub active_set_size: Option<usize>,
}

pub fn solve(system: &MeasurementSystem, u: &CorrelationVector, method: SolverMethod) -> Result<SolverReport> {
    match method {
        SolverMethod::Ls => solve_ls(system, u),
        SolverMethod::Nnls => solve_nnls(system, u),
    }
}

pub(crate) fn check_shape(system: &MeasurementSystem, u: &CorrelationVector) -> Result<()> {
    let rows = system.psi_tilde().nrows();
    if u.stacked.len() != rows {
        return Err(Error::LengthMismatch { expected: rows, actual: u.stacked.len() });
    }
    Ok(())
}

pub(crate) fn residual(system: &MeasurementSystem, u: &CorrelationVector, v: &DVector<f64>) -> f64 {
    (system.psi_tilde() * v - &u.stacked).norm()
}
