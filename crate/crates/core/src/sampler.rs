//! Multi-coset channel extraction and fractional-delay phase removal.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::synth::NyquistSignal;
use crate::system::SamplingPattern;

/// Default fractional-delay half length `K` (taps per side).
pub const DEFAULT_HALF_LENGTH: usize = 64;

/// `y[i][n] = x[n L + c_i]` for `n = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetSampleSet {
    pub pattern: SamplingPattern,
    pub y: Vec<Vec<f64>>,
}

impl CosetSampleSet {
    /// Samples per channel `N`.
    pub fn n(&self) -> usize {
        self.y.first().map_or(0, Vec::len)
    }
}

/// Channels after fractional delay, trimmed by `guard` samples at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedSampleSet {
    pub z: Vec<Vec<f64>>,
    pub guard: usize,
}

impl DelayedSampleSet {
    /// Samples per channel `M`.
    pub fn m(&self) -> usize {
        self.z.first().map_or(0, Vec::len)
    }
}

/// Nyquist samples needed to take `n` samples per channel.
pub fn required_length(pattern: &SamplingPattern, n: usize) -> usize {
    n.saturating_sub(1) * pattern.l() + pattern.max_offset() + 1
}

pub fn coset_sample(signal: &NyquistSignal, pattern: &SamplingPattern, n: usize) -> Result<CosetSampleSet> {
    let required = required_length(pattern, n);
    if n == 0 || signal.len() < required {
        return Err(Error::InsufficientSignal { required, available: signal.len() });
    }
    let l = pattern.l();
    let y = pattern
        .offsets()
        .iter()
        .map(|&c| (0..n).map(|k| signal.samples[k * l + c]).collect())
        .collect();
    Ok(CosetSampleSet { pattern: pattern.clone(), y })
}

fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        (PI * t).sin() / (PI * t)
    }
}

/// Hann-windowed sinc taps `h[k + K]` for `k = -K..=K` delaying by `delay`
/// samples. The window reaches zero at `|t| = K + 1`.
pub fn delay_filter(delay: f64, half_length: usize) -> Vec<f64> {
    let span = (half_length + 1) as f64;
    (-(half_length as i64)..=half_length as i64)
        .map(|k| {
            let t = k as f64 - delay;
            let w = if t.abs() < span { 0.5 + 0.5 * (PI * t / span).cos() } else { 0.0 };
            sinc(t) * w
        })
        .collect()
}

/// `z[n] = Σ_k h[k] y[n + K - k]` for the interior `n` where the whole filter
/// overlaps `y`; output length `len(y) - 2K`.
pub fn apply_delay(y: &[f64], delay: f64, half_length: usize) -> Result<Vec<f64>> {
    let taps = 2 * half_length + 1;
    if y.len() <= 2 * half_length {
        return Err(Error::InsufficientSignal { required: taps, available: y.len() });
    }
    if delay == 0.0 {
        return Ok(y[half_length..y.len() - half_length].to_vec());
    }
    let h = delay_filter(delay, half_length);
    Ok((half_length..y.len() - half_length)
        .map(|n| {
            // h index j = k + K pairs with y[n - k] = y[n + K - j]
            let window = &y[n - half_length..=n + half_length];
            h.iter().zip(window.iter().rev()).map(|(a, b)| a * b).sum()
        })
        .collect())
}

/// Delays channel `i` by `c_i / L` channel samples (`c_i / W` seconds),
/// removing the per-channel phase, and trims `K` samples from both ends of
/// every channel.
pub fn fractional_delay(set: &CosetSampleSet, half_length: usize) -> Result<DelayedSampleSet> {
    let l = set.pattern.l() as f64;
    let z = set
        .y
        .iter()
        .zip(set.pattern.offsets())
        .map(|(y, &c)| apply_delay(y, c as f64 / l, half_length))
        .collect::<Result<Vec<_>>>()?;
    Ok(DelayedSampleSet { z, guard: half_length })
}
