//! Nyquist-rate reference spectra and error metrics.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synth::NyquistSignal;
use crate::system::PsdEstimate;

/// Averaged rectangular-window periodogram over non-overlapping length-`L`
/// segments. Bin `k` carries `|X_k|² / L²` and lands in the subband with
/// `m = k (mod L)` taken in `-L/2+1..=L/2`; trailing samples that do not fill a
/// segment are dropped.
pub fn welch_subbands(signal: &NyquistSignal, l: usize) -> Result<PsdEstimate> {
    if l < 2 || !l.is_multiple_of(2) {
        return Err(Error::InvalidPattern(format!("L must be a positive even integer, got {l}")));
    }
    if signal.len() < 2 * l {
        return Err(Error::InsufficientSignal { required: 2 * l, available: signal.len() });
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(l);
    let segments = signal.len() / l;
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(segments * l);
    buf.extend(signal.samples[..segments * l].iter().map(|&x| Complex::new(x, 0.0)));
    fft.process(&mut buf);

    let mut bins = vec![0.0; l];
    for seg in buf.chunks_exact(l) {
        for (acc, x) in bins.iter_mut().zip(seg) {
            *acc += x.norm_sqr();
        }
    }
    let scale = 1.0 / (segments as f64 * (l * l) as f64);
    let half = l / 2;
    // m = k for k <= L/2 and k - L above; column = m + L/2 - 1
    let values = (0..l)
        .map(|col| {
            let m = col as i64 + 1 - half as i64;
            bins[m.rem_euclid(l as i64) as usize] * scale
        })
        .collect();
    Ok(PsdEstimate::new(values, signal.rate_hz))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMetrics {
    /// `‖v̂ - v‖² / ‖v‖²`.
    pub normalized_squared_error: f64,
    pub max_abs_error: f64,
    /// `|Σ v̂ - Σ v| / |Σ v|`.
    pub total_power_error: f64,
    /// `‖v̂ - v‖² / L`.
    pub mean_squared_error: f64,
}

pub fn metrics(estimate: &[f64], reference: &[f64]) -> Result<ErrorMetrics> {
    if estimate.len() != reference.len() {
        return Err(Error::LengthMismatch { expected: reference.len(), actual: estimate.len() });
    }
    if reference.is_empty() {
        return Err(Error::LengthMismatch { expected: 1, actual: 0 });
    }
    let sq: f64 = estimate.iter().zip(reference).map(|(a, b)| (a - b).powi(2)).sum();
    let norm: f64 = reference.iter().map(|b| b * b).sum();
    let max_abs_error = estimate.iter().zip(reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let total_ref: f64 = reference.iter().sum();
    let total_est: f64 = estimate.iter().sum();
    let ratio = |num: f64, den: f64| {
        if num == 0.0 {
            0.0
        } else if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    };
    Ok(ErrorMetrics {
        normalized_squared_error: ratio(sq, norm),
        max_abs_error,
        total_power_error: ratio((total_est - total_ref).abs(), total_ref.abs()),
        mean_squared_error: sq / reference.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sig(samples: Vec<f64>) -> NyquistSignal {
        NyquistSignal { samples, rate_hz: 1.0 }
    }

    #[test]
    fn tone_at_bin_center() {
        // cos(2π 3 n / 16) has power 1/2 split equally between m = ±3
        let l = 16;
        let x: Vec<f64> = (0..l * 40).map(|n| (2.0 * PI * 3.0 * n as f64 / l as f64 + 0.4).cos()).collect();
        let est = welch_subbands(&sig(x), l).unwrap();
        let v = est.values();
        let col = |m: i64| (m + l as i64 / 2 - 1) as usize;
        assert!((v[col(3)] - 0.25).abs() < 1e-12);
        assert!((v[col(-3)] - 0.25).abs() < 1e-12);
        assert!((v[col(3)] + v[col(-3)]) / est.total_power() > 0.99);
    }

    #[test]
    fn nyquist_bin_and_parseval() {
        let l = 8;
        let x: Vec<f64> = (0..64).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let est = welch_subbands(&sig(x), l).unwrap();
        assert!((est.values()[l - 1] - 1.0).abs() < 1e-12);

        let y: Vec<f64> = (0..8 * 10 + 3).map(|n| ((n * 7919) % 13) as f64 - 6.0).collect();
        let mean_power = y[..80].iter().map(|v| v * v).sum::<f64>() / 80.0;
        let est = welch_subbands(&sig(y), l).unwrap();
        assert!((est.total_power() - mean_power).abs() < 1e-10);
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            welch_subbands(&sig(vec![0.0; 15]), 8),
            Err(Error::InsufficientSignal { required: 16, available: 15 })
        ));
    }

    #[test]
    fn metric_algebra() {
        let r = [1.0, 2.0, 3.0];
        let m = metrics(&r, &r).unwrap();
        assert_eq!(m.normalized_squared_error, 0.0);
        assert_eq!(m.total_power_error, 0.0);
        let twice: Vec<f64> = r.iter().map(|x| 2.0 * x).collect();
        let m = metrics(&twice, &r).unwrap();
        assert!((m.normalized_squared_error - 1.0).abs() < 1e-15);
        assert_eq!(m.max_abs_error, 3.0);
        assert!((m.total_power_error - 1.0).abs() < 1e-15);
        assert!((m.mean_squared_error - 14.0 / 3.0).abs() < 1e-15);
        assert!(matches!(metrics(&r, &r[..2]), Err(Error::LengthMismatch { .. })));
    }
}
