//! Sampling-pattern generation and validation.

mod golomb;

pub use golomb::{golomb_ruler, is_golomb, GolombRuler, MAX_ORDER, MIN_ORDER};

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::rng::{substream, PATTERN_STREAM_BASE};
use crate::system::{MeasurementSystem, SamplingPattern};
use crate::tradeoff::measurements;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternDiagnostics {
    pub rank: usize,
    /// `σ_max / σ_min` of `Ψ̃`, infinite when rank deficient.
    pub condition_number: f64,
    pub full_rank: bool,
    /// `L / (q(q-1)+1)`.
    pub ratio: f64,
}

/// Draws `q` distinct offsets uniformly from `0..L`.
pub fn random_pattern(l: usize, q: usize, seed: u64) -> Result<SamplingPattern> {
    random_pattern_with(&mut substream(seed, PATTERN_STREAM_BASE), l, q)
}

pub fn random_pattern_with<R: Rng + ?Sized>(rng: &mut R, l: usize, q: usize) -> Result<SamplingPattern> {
    if q > l {
        return Err(Error::InvalidPattern(format!("q = {q} exceeds L = {l}")));
    }
    let offsets = rand::seq::index::sample(rng, l, q).into_vec();
    SamplingPattern::new(l, offsets)
}

/// Rank and condition number of `Ψ̃` from its singular values.
pub fn diagnose(pattern: &SamplingPattern) -> PatternDiagnostics {
    let system = MeasurementSystem::new(pattern);
    diagnose_matrix(system.psi_tilde(), pattern.q())
}

pub(crate) fn diagnose_matrix(psi_tilde: &DMatrix<f64>, q: usize) -> PatternDiagnostics {
    let cols = psi_tilde.ncols();
    let sv = singular_values(psi_tilde);
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > RANK_TOLERANCE * smax).count();
    let full_rank = rank == cols;
    let condition_number = if full_rank { smax / sv[cols - 1] } else { f64::INFINITY };
    PatternDiagnostics { rank, condition_number, full_rank, ratio: cols as f64 / measurements(q) as f64 }
}

/// True when the pairwise differences (plus 0) include every value in `0..s`.
pub fn covers_consecutive_differences(pattern: &SamplingPattern, s: usize) -> bool {
    let diffs = pattern.difference_set();
    (0..s).all(|t| diffs.contains(&t))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub q: usize,
    pub fraction_full_rank: f64,
    /// Mean condition number over full-rank trials; `None` if there were none.
    pub mean_condition: Option<f64>,
}

/// Monte Carlo rate at which uniformly random patterns give a full-rank `Ψ̃`.
///
/// Trial `t` at channel count `q` draws from its own substream, so results do
/// not depend on scheduling.
pub fn threshold_sweep(
    l: usize,
    qs: impl IntoIterator<Item = usize>,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if trials == 0 {
        return Err(Error::config("trials", "must be at least 1"));
    }
    qs.into_iter()
        .map(|q| {
            let diags = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let stream = PATTERN_STREAM_BASE + ((q as u64) << 24) + t as u64;
                    random_pattern_with(&mut substream(seed, stream), l, q).map(|p| diagnose(&p))
                })
                .collect::<Result<Vec<_>>>()?;
            let full: Vec<f64> = diags.iter().filter(|d| d.full_rank).map(|d| d.condition_number).collect();
            let mean_condition =
                if full.is_empty() { None } else { Some(full.iter().sum::<f64>() / full.len() as f64) };
            Ok(SweepPoint { q, fraction_full_rank: full.len() as f64 / trials as f64, mean_condition })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const RULER7: [usize; 7] = [1, 3, 4, 11, 17, 22, 26];

    /// Difference set by direct enumeration of all ordered pairs.
    fn brute_differences(offsets: &[usize]) -> Vec<usize> {
        let mut d: Vec<usize> =
            offsets.iter().flat_map(|&a| offsets.iter().map(move |&b| a.abs_diff(b))).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    #[test]
    fn ruler7_difference_set() {
        let d = brute_differences(&RULER7);
        let expected = [
            0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 16, 18, 19, 21, 22, 23, 25,
        ];
        assert_eq!(d, expected);
        let p = SamplingPattern::new(128, RULER7.to_vec()).unwrap();
        assert_eq!(p.difference_set().into_iter().collect::<Vec<_>>(), expected);
        assert!(covers_consecutive_differences(&p, 12));
        assert!(!covers_consecutive_differences(&p, 13));
        assert!(!covers_consecutive_differences(&p, 16));
        assert!(covers_consecutive_differences(&p, 1));
    }

    #[test]
    fn random_patterns() {
        let p = random_pattern(4, 4, 99).unwrap();
        assert_eq!(p.offsets(), &[0, 1, 2, 3]);
        let p = random_pattern(64, 10, 7).unwrap();
        assert_eq!(p.q(), 10);
        assert!(p.offsets().iter().all(|&c| c < 64));
        assert_eq!(p, random_pattern(64, 10, 7).unwrap());
        assert!(random_pattern(8, 9, 0).is_err());
    }

    #[test]
    fn golomb_ten_conditioning() {
        let p = SamplingPattern::new(64, golomb_ruler(10).unwrap().marks).unwrap();
        let d = diagnose(&p);
        assert!(d.full_rank);
        assert_eq!(d.rank, 64);
        assert!((1.2..=1.6).contains(&d.condition_number), "cond = {}", d.condition_number);
    }

    #[test]
    fn too_few_rows() {
        let d = diagnose(&SamplingPattern::new(64, vec![3, 40]).unwrap());
        assert!(d.rank <= 3);
        assert!(!d.full_rank);
        assert!(d.condition_number.is_infinite());
    }

    #[test]
    fn sweep_extremes() {
        let pts = threshold_sweep(64, [10, 63], 10, 5).unwrap();
        assert_eq!(pts[0].fraction_full_rank, 0.0);
        assert!(pts[0].mean_condition.is_none());
        assert_eq!(pts[1].fraction_full_rank, 1.0);
        assert!(pts[1].mean_condition.unwrap().is_finite());
        assert_eq!(pts, threshold_sweep(64, [10, 63], 10, 5).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn diagnose_ignores_offset_order(seed in any::<u64>(), q in 2usize..9) {
            let p = random_pattern(16, q, seed).unwrap();
            let mut shuffled = p.offsets().to_vec();
            shuffled.reverse();
            let d1 = diagnose(&p);
            let d2 = diagnose(&SamplingPattern::new(16, shuffled).unwrap());
            prop_assert_eq!(d1.rank, d2.rank);
            prop_assert!(d1.condition_number == d2.condition_number
                || (d1.condition_number - d2.condition_number).abs() < 1e-9 * d1.condition_number);
        }

        #[test]
        fn rank_bounded_by_rows(seed in any::<u64>(), q in 2usize..12) {
            let p = random_pattern(64, q, seed).unwrap();
            let d = diagnose(&p);
            prop_assert!(d.rank <= measurements(q).min(64));
            if measurements(q) < 64 {
                prop_assert!(!d.full_rank);
            }
            if d.full_rank {
                prop_assert!(d.condition_number.is_finite());
            }
        }

        #[test]
        fn coverage_is_downward_closed(seed in any::<u64>(), q in 2usize..10, s in 1usize..40) {
            let p = random_pattern(64, q, seed).unwrap();
            if covers_consecutive_differences(&p, s) {
                for t in 1..s {
                    prop_assert!(covers_consecutive_differences(&p, t));
                }
            }
        }
    }
}
