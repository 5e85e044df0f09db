use mcpsd::reference::welch_subbands;
use mcpsd::synth::{generate, true_psd};
use mcpsd::ProcessSpec;

#[test]
fn white_noise_is_flat() {
    let l = 16;
    let x = generate(&ProcessSpec::White { variance: 1.0, nyquist_hz: 1.0 }, 1 << 20, 2).unwrap();
    let est = welch_subbands(&x, l).unwrap();
    for &v in est.values() {
        assert!((v * l as f64 - 1.0).abs() < 0.05, "subband power {v}");
    }
    assert!((est.total_power() - 1.0).abs() < 0.01);
}

#[test]
fn sparse_leakage_stays_near_active_bands() {
    let spec = ProcessSpec::sparse_two_band_example();
    let l = 128;
    // support: subbands holding at least 0.1% of the peak true power
    let truth = true_psd(&spec, l).unwrap().into_values();
    let tpeak = truth.iter().cloned().fold(0.0, f64::max);
    let active: Vec<bool> = truth.iter().map(|&t| t >= 1e-3 * tpeak).collect();
    let distance = |col: usize| {
        (0..l).filter(|&c| active[c]).map(|c| (c as i64 - col as i64).unsigned_abs()).min().unwrap()
    };
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let x = generate(&spec, 1 << 19, seed).unwrap();
        let v = welch_subbands(&x, l).unwrap().into_values();
        let peak = v.iter().cloned().fold(0.0, f64::max);
        for col in (0..l).filter(|&c| distance(c) >= 2) {
            worst = worst.max(v[col] / peak);
        }
    }
    assert!(worst <= 0.01, "worst inactive/peak ratio {worst}");
}

fn worst_significant_error(spec: &ProcessSpec, l: usize, seed: u64) -> f64 {
    let x = generate(spec, 1 << 20, seed).unwrap();
    let est = welch_subbands(&x, l).unwrap().into_values();
    let truth = true_psd(spec, l).unwrap().into_values();
    let peak = truth.iter().cloned().fold(0.0, f64::max);
    truth
        .iter()
        .zip(&est)
        .filter(|(t, _)| **t > 0.01 * peak)
        .map(|(t, e)| (e - t).abs() / t)
        .fold(0.0, f64::max)
}

#[test]
fn matches_true_psd_for_white_and_notched() {
    let white = worst_significant_error(&ProcessSpec::White { variance: 2.0, nyquist_hz: 1.0 }, 32, 7);
    let notched = worst_significant_error(&ProcessSpec::notched_example(), 64, 7);
    assert!(white < 0.05, "white {white}");
    assert!(notched < 0.05, "notched {notched}");
}
