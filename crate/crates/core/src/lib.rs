//! Power spectral density estimation from sub-Nyquist multi-coset samples.
//!
//! A multi-coset sampler keeps `q` of every `L` Nyquist-rate samples at fixed
//! offsets. The lag-0 cross-correlations between fractionally delayed channels
//! are linear in the average powers of the `L` subbands of width `W/L`, so the
//! subband powers can be recovered by least squares when the stacked system is
//! overdetermined, or by non-negative least squares when it is underdetermined
//! and the spectrum is sparse.
//!
//! Pipeline: [`synth::generate`] → [`sampler::coset_sample`] →
//! [`sampler::fractional_delay`] → [`estimator::assemble_u`] →
//! [`estimator::solve_ls`] / [`estimator::solve_nnls`].

pub mod error;
pub mod estimator;
pub mod experiment;
mod linalg;
pub mod patterns;
pub mod reference;
pub mod rng;
pub mod sampler;
pub mod synth;
pub mod system;
pub mod tradeoff;

pub use error::{Error, Result};
pub use estimator::{CorrelationVector, SolverMethod, SolverReport};
pub use patterns::{GolombRuler, PatternDiagnostics};
pub use sampler::{CosetSampleSet, DelayedSampleSet};
pub use synth::{NyquistSignal, ProcessSpec};
pub use system::{MeasurementSystem, PairOrdering, PsdEstimate, SamplingPattern};
pub use tradeoff::{Regime, TradeoffReport};
