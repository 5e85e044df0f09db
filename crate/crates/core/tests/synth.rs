use std::f64::consts::PI;

use mcpsd::synth::{generate, true_psd};
use mcpsd::ProcessSpec;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

const OVERSAMPLE: usize = 64;

/// Half-overlapped Hann periodogram with `OVERSAMPLE` bins per subband,
/// integrated over each subband with half weight on the shared edge bins.
fn fine_subbands(x: &[f64], l: usize) -> Vec<f64> {
    let nfft = OVERSAMPLE * l;
    let window: Vec<f64> = (0..nfft).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / nfft as f64).cos()).collect();
    let energy: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(nfft);
    let mut density = vec![0.0; nfft];
    let mut segments = 0;
    let mut start = 0;
    while start + nfft <= x.len() {
        let mut buf: Vec<Complex<f64>> =
            x[start..start + nfft].iter().zip(&window).map(|(v, w)| Complex::new(v * w, 0.0)).collect();
        fft.process(&mut buf);
        for (d, c) in density.iter_mut().zip(&buf) {
            *d += c.norm_sqr() / energy;
        }
        segments += 1;
        start += nfft / 2;
    }
    let half = (l / 2) as i64;
    let o = OVERSAMPLE as i64;
    (0..l as i64)
        .map(|col| {
            let m = col + 1 - half;
            let mut acc = 0.0;
            for k in (m * o - o / 2)..=(m * o + o / 2) {
                let w = if (k - m * o).abs() == o / 2 { 0.5 } else { 1.0 };
                acc += w * density[k.rem_euclid(nfft as i64) as usize];
            }
            acc / (segments as f64 * nfft as f64)
        })
        .collect()
}

fn worst_error(spec: &ProcessSpec, l: usize, seed: u64) -> f64 {
    let x = generate(spec, 1 << 20, seed).unwrap();
    let est = fine_subbands(&x.samples, l);
    let truth = true_psd(spec, l).unwrap().into_values();
    let peak = truth.iter().cloned().fold(0.0, f64::max);
    truth
        .iter()
        .zip(&est)
        .filter(|(t, _)| **t > 0.05 * peak)
        .map(|(t, e)| (e - t).abs() / t)
        .fold(0.0, f64::max)
}

#[test]
fn realizations_match_true_psd() {
    for (name, spec, l) in [
        ("ma-lines", ProcessSpec::ma_lines_example(), 16),
        ("notched", ProcessSpec::notched_example(), 64),
        ("sparse", ProcessSpec::sparse_two_band_example(), 128),
    ] {
        let err = worst_error(&spec, l, 11);
        assert!(err < 0.05, "{name}: worst relative error {err}");
    }
}

#[test]
fn variance_matches_total_power() {
    for spec in [ProcessSpec::ma_lines_example(), ProcessSpec::notched_example(), ProcessSpec::sparse_two_band_example()] {
        let x = generate(&spec, 1 << 19, 3).unwrap();
        let var = x.samples.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        let expected = spec.total_power();
        assert!((var - expected).abs() / expected < 0.03, "variance {var}, expected {expected}");
        let sum: f64 = true_psd(&spec, 32).unwrap().values().iter().sum();
        assert!((sum - expected).abs() / expected < 1e-6);
    }
}

#[test]
fn seeds_are_reproducible() {
    let spec = ProcessSpec::notched_example();
    assert_eq!(generate(&spec, 4096, 9).unwrap(), generate(&spec, 4096, 9).unwrap());
    assert_ne!(generate(&spec, 4096, 9).unwrap(), generate(&spec, 4096, 10).unwrap());
}
