//! Sampling patterns, the subband-power measurement matrix, and the
//! subband/frequency bookkeeping shared by every other module.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-coset sampling parameters: period `L` (in Nyquist samples) and the
/// `q` channel offsets within each period.
///
/// Offsets are stored sorted ascending. They are kept verbatim otherwise, so a
/// ruler starting at mark 1 keeps offset 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct SamplingPattern {
    l: usize,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPattern {
    l: usize,
    offsets: Vec<usize>,
}

impl TryFrom<RawPattern> for SamplingPattern {
    type Error = Error;
    fn try_from(raw: RawPattern) -> Result<Self> {
        SamplingPattern::new(raw.l, raw.offsets)
    }
}

impl From<SamplingPattern> for RawPattern {
    fn from(p: SamplingPattern) -> Self {
        RawPattern { l: p.l, offsets: p.offsets }
    }
}

impl SamplingPattern {
    pub fn new(l: usize, mut offsets: Vec<usize>) -> Result<Self> {
        if l < 2 || !l.is_multiple_of(2) {
            return Err(Error::InvalidPattern(format!("L must be a positive even integer, got {l}")));
        }
        if offsets.len() < 2 {
            return Err(Error::InvalidPattern(format!(
                "at least 2 channels required, got {}",
                offsets.len()
            )));
        }
        if offsets.len() > l {
            return Err(Error::InvalidPattern(format!("q = {} exceeds L = {l}", offsets.len())));
        }
        if let Some(&c) = offsets.iter().find(|&&c| c >= l) {
            return Err(Error::InvalidPattern(format!("offset {c} not in [0, {l})")));
        }
        offsets.sort_unstable();
        if let Some(w) = offsets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern(format!("duplicate offset {}", w[0])));
        }
        Ok(SamplingPattern { l, offsets })
    }

    /// Downsampling period `L`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Channel count `q`.
    pub fn q(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn max_offset(&self) -> usize {
        *self.offsets.last().expect("pattern has at least two offsets")
    }

    /// Rows of the real-stacked measurement matrix, `q(q-1)+1`.
    pub fn stacked_rows(&self) -> usize {
        let q = self.q();
        q * (q - 1) + 1
    }

    /// Average sampling rate `qW/L` for a Nyquist rate `W`.
    pub fn average_rate(&self, nyquist_hz: f64) -> f64 {
        self.q() as f64 * nyquist_hz / self.l as f64
    }

    /// Set of absolute pairwise differences, including 0.
    pub fn difference_set(&self) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([0]);
        for (i, &a) in self.offsets.iter().enumerate() {
            for &b in &self.offsets[i + 1..] {
                set.insert(b - a);
            }
        }
        set
    }
}

/// One row of the complex measurement system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairEntry {
    /// The single row of ones standing for every `a == b` pair.
    Equal,
    /// Cross-correlation of channels `a` and `b` (indices into the sorted offsets).
    Cross { a: usize, b: usize },
}

/// Row ordering shared by the correlation vector and the measurement matrix.
///
/// Entry 0 is always [`PairEntry::Equal`]; the default ordering lists the
/// cross pairs `a < b` lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrdering {
    entries: Vec<PairEntry>,
    differences: Vec<i64>,
}

impl PairOrdering {
    pub fn lexicographic(pattern: &SamplingPattern) -> Self {
        let q = pattern.q();
        let pairs = (0..q).flat_map(|a| (a + 1..q).map(move |b| (a, b)));
        Self::build(pattern, pairs)
    }

    /// Custom ordering. Every unordered channel pair must appear exactly once;
    /// `(b, a)` is accepted in place of `(a, b)` and flips the sign of the difference.
    pub fn from_cross_pairs(pattern: &SamplingPattern, pairs: &[(usize, usize)]) -> Result<Self> {
        let q = pattern.q();
        let expected = q * (q - 1) / 2;
        if pairs.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: pairs.len() });
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in pairs {
            if a >= q || b >= q || a == b {
                return Err(Error::InvalidPattern(format!("invalid channel pair ({a}, {b})")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidPattern(format!("channel pair ({a}, {b}) repeated")));
            }
        }
        Ok(Self::build(pattern, pairs.iter().copied()))
    }

    fn build(pattern: &SamplingPattern, pairs: impl Iterator<Item = (usize, usize)>) -> Self {
        let c = pattern.offsets();
        let mut entries = vec![PairEntry::Equal];
        let mut differences = vec![0];
        for (a, b) in pairs {
            entries.push(PairEntry::Cross { a, b });
            differences.push(c[a] as i64 - c[b] as i64);
        }
        PairOrdering { entries, differences }
    }

    pub fn entries(&self) -> &[PairEntry] {
        &self.entries
    }

    /// `c_a - c_b` for each entry, 0 for the equal entry.
    pub fn differences(&self) -> &[i64] {
        &self.differences
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Subband index `m_l = -L/2 + 1 + l` of column `l`.
pub fn subband_index(l: usize, big_l: usize) -> i64 {
    l as i64 + 1 - (big_l / 2) as i64
}

/// Frequency interval `[(2m-1)W/(2L), (2m+1)W/(2L)]` in Hz of column `l`.
pub fn subband_bounds(l: usize, big_l: usize, nyquist_hz: f64) -> Result<(f64, f64)> {
    if l >= big_l {
        return Err(Error::IndexOutOfRange { index: l, len: big_l });
    }
    let m = subband_index(l, big_l) as f64;
    let half = nyquist_hz / (2.0 * big_l as f64);
    Ok(((2.0 * m - 1.0) * half, (2.0 * m + 1.0) * half))
}

/// Complex matrix `Ψ` and its real-stacked form `Ψ̃`.
#[derive(Debug, Clone)]
pub struct MeasurementSystem {
    pattern: SamplingPattern,
    ordering: PairOrdering,
    psi: DMatrix<Complex64>,
    psi_tilde: DMatrix<f64>,
}

impl MeasurementSystem {
    pub fn new(pattern: &SamplingPattern) -> Self {
        let ordering = PairOrdering::lexicographic(pattern);
        Self::with_ordering(pattern, ordering)
    }

    /// `ordering` must have been built from `pattern`.
    pub fn with_ordering(pattern: &SamplingPattern, ordering: PairOrdering) -> Self {
        let big_l = pattern.l();
        let rows = ordering.len();
        let psi = DMatrix::from_fn(rows, big_l, |i, l| {
            let delta = ordering.differences()[i];
            let m = subband_index(l, big_l);
            // reduce the phase index mod L before scaling to keep the argument small
            let k = (delta * m).rem_euclid(big_l as i64) as f64;
            Complex64::from_polar(1.0, -2.0 * PI * k / big_l as f64)
        });
        // Re(Ψ) over Im(Ψ) without the identically-zero imaginary row of the equal entry
        let psi_tilde = DMatrix::from_fn(2 * rows - 1, big_l, |r, l| {
            if r < rows {
                psi[(r, l)].re
            } else {
                psi[(r - rows + 1, l)].im
            }
        });
        MeasurementSystem { pattern: pattern.clone(), ordering, psi, psi_tilde }
    }

    pub fn pattern(&self) -> &SamplingPattern {
        &self.pattern
    }

    pub fn ordering(&self) -> &PairOrdering {
        &self.ordering
    }

    pub fn psi(&self) -> &DMatrix<Complex64> {
        &self.psi
    }

    pub fn psi_tilde(&self) -> &DMatrix<f64> {
        &self.psi_tilde
    }
}

/// Partial DFT matrix for sparse non-negative recovery.
///
/// Row `2t` holds `cos(2π t m_l / L)` and row `2t + 1` holds `sin(2π t m_l / L)`
/// for `t = 0..s`, with columns in the same `m_l` convention as `Ψ`. Relative
/// to the classical `A[k][n]` with column index `n = 0..L-1`, columns are
/// reindexed by `n = m_l`, i.e. a cyclic rotation of the points on the
/// trigonometric moment curve. Every row is, up to sign, a row of `Ψ̃`.
pub fn build_partial_dft_a(pattern: &SamplingPattern, s: usize) -> Result<DMatrix<f64>> {
    let diffs = pattern.difference_set();
    if let Some(t) = (0..s).find(|t| !diffs.contains(t)) {
        return Err(Error::MissingDifference(t));
    }
    let big_l = pattern.l();
    Ok(DMatrix::from_fn(2 * s, big_l, |r, l| {
        let t = (r / 2) as i64;
        let k = (t * subband_index(l, big_l)).rem_euclid(big_l as i64) as f64;
        let phase = 2.0 * PI * k / big_l as f64;
        if r % 2 == 0 {
            phase.cos()
        } else {
            phase.sin()
        }
    }))
}

/// Per-subband average powers `v[l] = P(m_l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdEstimate {
    values: Vec<f64>,
    nyquist_hz: f64,
}

impl PsdEstimate {
    pub fn new(values: Vec<f64>, nyquist_hz: f64) -> Self {
        PsdEstimate { values, nyquist_hz }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn l(&self) -> usize {
        self.values.len()
    }

    pub fn nyquist_hz(&self) -> f64 {
        self.nyquist_hz
    }

    /// Width `W/L` of each piecewise-constant segment.
    pub fn resolution_hz(&self) -> f64 {
        self.nyquist_hz / self.l() as f64
    }

    pub fn bounds(&self, l: usize) -> Result<(f64, f64)> {
        subband_bounds(l, self.l(), self.nyquist_hz)
    }

    /// Height `(L/W) v[l]` of the piecewise-constant density over band `l`.
    pub fn density(&self, l: usize) -> f64 {
        self.values[l] * self.l() as f64 / self.nyquist_hz
    }

    pub fn total_power(&self) -> f64 {
        self.values.iter().sum()
    }
}
