//! Windowed-sinc FIR designs and linear convolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

fn blackman(n: usize, len: usize) -> f64 {
    let x = 2.0 * PI * n as f64 / (len - 1) as f64;
    0.42 - 0.5 * x.cos() + 0.08 * (2.0 * x).cos()
}

/// Ideal real bandpass `[lo, hi]` (rad/sample, both sidebands) impulse
/// response at offset `t` from the filter center.
fn ideal_bandpass(t: f64, lo: f64, hi: f64) -> f64 {
    if t == 0.0 {
        (hi - lo) / PI
    } else {
        ((hi * t).sin() - (lo * t).sin()) / (PI * t)
    }
}

/// Linear-phase bandpass passing every `(lo, hi)` interval (rad/sample, within
/// `[0, π]`) with unit gain. `taps` must be odd.
pub fn multiband_bandpass(taps: usize, bands: &[(f64, f64)]) -> Vec<f64> {
    let center = (taps / 2) as f64;
    (0..taps)
        .map(|n| {
            let t = n as f64 - center;
            let ideal: f64 = bands.iter().map(|&(lo, hi)| ideal_bandpass(t, lo, hi)).sum();
            ideal * blackman(n, taps)
        })
        .collect()
}

/// Linear-phase band-stop rejecting every `(lo, hi)` interval.
pub fn multiband_bandstop(taps: usize, stops: &[(f64, f64)]) -> Vec<f64> {
    let mut h = multiband_bandpass(taps, stops);
    h.iter_mut().for_each(|x| *x = -*x);
    h[taps / 2] += 1.0;
    h
}

/// Autocorrelation `r[d] = Σ_n h[n] h[n+d]` for `d = 0..len`.
pub fn autocorrelation(h: &[f64]) -> Vec<f64> {
    (0..h.len()).map(|d| h.iter().zip(&h[d..]).map(|(a, b)| a * b).sum()).collect()
}

/// `|H(e^{jθ})|²` from the filter autocorrelation, via Clenshaw's recurrence
/// on the cosine series `r[0] + 2 Σ r[d] cos(dθ)`.
pub fn power_response(autocorr: &[f64], theta: f64) -> f64 {
    let x = theta.cos();
    let (mut b1, mut b2) = (0.0, 0.0);
    for &r in autocorr.iter().skip(1).rev() {
        let b0 = 2.0 * r + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    autocorr[0] + x * b1 - b2
}

/// Valid-mode convolution: `y[k] = Σ_j h[j] x[k + T - 1 - j]`, length `len(x) - T + 1`.
pub fn convolve_valid(x: &[f64], h: &[f64]) -> Vec<f64> {
    assert!(x.len() >= h.len(), "input shorter than filter");
    if h.len() <= 64 {
        let t = h.len();
        (0..x.len() - t + 1)
            .map(|k| h.iter().enumerate().map(|(j, &hj)| hj * x[k + t - 1 - j]).sum())
            .collect()
    } else {
        overlap_save(x, h)
    }
}

fn overlap_save(x: &[f64], h: &[f64]) -> Vec<f64> {
    let t = h.len();
    let out_len = x.len() - t + 1;
    let nfft = (4 * t).next_power_of_two().max(4096);
    let step = nfft - t + 1;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(nfft);
    let inv = planner.plan_fft_inverse(nfft);

    let mut hf: Vec<Complex64> = h.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    hf.resize(nfft, Complex64::new(0.0, 0.0));
    fwd.process(&mut hf);

    let scale = 1.0 / nfft as f64;
    let mut y = Vec::with_capacity(out_len);
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    let mut start = 0;
    while start < out_len {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(x.get(start + i).copied().unwrap_or(0.0), 0.0);
        }
        fwd.process(&mut buf);
        buf.iter_mut().zip(&hf).for_each(|(b, hv)| *b *= hv);
        inv.process(&mut buf);
        let take = step.min(out_len - start);
        y.extend(buf[t - 1..t - 1 + take].iter().map(|c| c.re * scale));
        start += step;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(x: &[f64], h: &[f64]) -> Vec<f64> {
        let t = h.len();
        (0..x.len() - t + 1).map(|k| (0..t).map(|j| h[j] * x[k + t - 1 - j]).sum()).collect()
    }

    #[test]
    fn fft_matches_direct() {
        let x: Vec<f64> = (0..20_000).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let h = multiband_bandpass(513, &[(0.3, 0.5)]);
        let a = convolve_valid(&x, &h);
        let b = direct(&x, &h);
        assert_eq!(a.len(), b.len());
        let err = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "max err {err}");
    }

    #[test]
    fn ma_polynomial_expansion() {
        // (1 - z^-1)(1 + z^-1)^3 by repeated convolution of the factors
        let mut poly = vec![1.0];
        for factor in [[1.0, -1.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0]] {
            let mut next = vec![0.0; poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i] += p * factor[0];
                next[i + 1] += p * factor[1];
            }
            poly = next;
        }
        assert_eq!(poly, vec![1.0, 2.0, 0.0, -2.0, -1.0]);
    }

    #[test]
    fn power_response_matches_dtft() {
        let h = [1.0, 2.0, 0.0, -2.0, -1.0];
        let r = autocorrelation(&h);
        for k in 0..50 {
            let theta = -PI + 2.0 * PI * k as f64 / 49.0;
            let (re, im) = h.iter().enumerate().fold((0.0, 0.0), |(re, im), (n, &v)| {
                (re + v * (theta * n as f64).cos(), im - v * (theta * n as f64).sin())
            });
            assert!((power_response(&r, theta) - (re * re + im * im)).abs() < 1e-10);
        }
    }

    #[test]
    fn bandpass_gain() {
        let h = multiband_bandpass(1025, &[(1.0, 1.5)]);
        let r = autocorrelation(&h);
        assert!((power_response(&r, 1.25) - 1.0).abs() < 1e-3);
        assert!(power_response(&r, 0.5) < 1e-6);
        let s = multiband_bandstop(1025, &[(1.0, 1.5)]);
        let r = autocorrelation(&s);
        assert!(power_response(&r, 1.25) < 1e-6);
        assert!((power_response(&r, 0.5) - 1.0).abs() < 1e-3);
    }
}
