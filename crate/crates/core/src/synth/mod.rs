//! Nyquist-rate realizations of stationary test processes and their exact
//! subband powers.
//!
//! Every process is unit-variance white Gaussian noise through an FIR filter,
//! optionally plus random-phase sinusoids. Filtered outputs are taken in valid
//! mode, so a realization is stationary from its first sample.

pub mod fir;
pub mod quad;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::system::{subband_index, PsdEstimate};

pub const DEFAULT_TAPS: usize = 1025;
const MIN_TAPS: usize = 513;

/// A sinusoid `amplitude · cos(frequency · k + φ)` with `φ` uniform per realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub amplitude: f64,
    /// Radians per Nyquist sample, in `(0, π)`.
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center_hz: f64,
    pub width_hz: f64,
}

impl Band {
    /// Lower and upper edge in Hz.
    pub fn edges(&self) -> (f64, f64) {
        (self.center_hz - 0.5 * self.width_hz, self.center_hz + 0.5 * self.width_hz)
    }
}

fn default_nyquist() -> f64 {
    1.0
}

fn default_taps() -> usize {
    DEFAULT_TAPS
}

/// Generative description of a real zero-mean WSS test process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    /// Moving-average filtered white noise plus spectral lines.
    MaWithLines {
        coefficients: Vec<f64>,
        #[serde(default)]
        lines: Vec<Line>,
        #[serde(default = "default_nyquist")]
        nyquist_hz: f64,
    },
    /// White noise through a bandpass with unit gain over each active band.
    SparseMultiband {
        nyquist_hz: f64,
        bands: Vec<Band>,
        #[serde(default = "default_taps")]
        taps: usize,
    },
    /// White noise through a band-stop with a notch over each stop band.
    Notched {
        nyquist_hz: f64,
        stop_bands: Vec<Band>,
        #[serde(default = "default_taps")]
        taps: usize,
    },
    White {
        variance: f64,
        #[serde(default = "default_nyquist")]
        nyquist_hz: f64,
    },
}

impl ProcessSpec {
    /// `H(z) = (1 - z^-1)(1 + z^-1)^3` plus `2cos(8πk/17)` and `2cos(11πk/20)`.
    pub fn ma_lines_example() -> Self {
        ProcessSpec::MaWithLines {
            coefficients: vec![1.0, 2.0, 0.0, -2.0, -1.0],
            lines: vec![
                Line { amplitude: 2.0, frequency: 8.0 * PI / 17.0 },
                Line { amplitude: 2.0, frequency: 11.0 * PI / 20.0 },
            ],
            nyquist_hz: 1.0,
        }
    }

    /// Two 30 MHz bands in a 1 GHz band-limited signal (`W` = 2 GHz), each
    /// centered on a subband edge at `L = 128`.
    pub fn sparse_two_band_example() -> Self {
        ProcessSpec::SparseMultiband {
            nyquist_hz: 2e9,
            bands: vec![
                Band { center_hz: 257.8125e6, width_hz: 30e6 },
                Band { center_hz: 632.8125e6, width_hz: 30e6 },
            ],
            taps: DEFAULT_TAPS,
        }
    }

    /// Two 80 MHz stop bands in a 1 GHz band-limited signal (`W` = 2 GHz).
    pub fn notched_example() -> Self {
        ProcessSpec::Notched {
            nyquist_hz: 2e9,
            stop_bands: vec![
                Band { center_hz: 296.875e6, width_hz: 80e6 },
                Band { center_hz: 703.125e6, width_hz: 80e6 },
            ],
            taps: DEFAULT_TAPS,
        }
    }

    pub fn nyquist_hz(&self) -> f64 {
        match self {
            ProcessSpec::MaWithLines { nyquist_hz, .. }
            | ProcessSpec::SparseMultiband { nyquist_hz, .. }
            | ProcessSpec::Notched { nyquist_hz, .. }
            | ProcessSpec::White { nyquist_hz, .. } => *nyquist_hz,
        }
    }

    pub fn lines(&self) -> &[Line] {
        match self {
            ProcessSpec::MaWithLines { lines, .. } => lines,
            _ => &[],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProcess(msg));
        let w = self.nyquist_hz();
        if !(w.is_finite() && w > 0.0) {
            return bad(format!("nyquist_hz must be positive, got {w}"));
        }
        match self {
            ProcessSpec::MaWithLines { coefficients, lines, .. } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("MA coefficients must be a non-empty list of finite values".into());
                }
                for line in lines {
                    if !(line.frequency > 0.0 && line.frequency < PI) || !line.amplitude.is_finite() {
                        return bad(format!("line frequency {} not in (0, π)", line.frequency));
                    }
                }
            }
            ProcessSpec::SparseMultiband { bands, taps, .. } | ProcessSpec::Notched { stop_bands: bands, taps, .. } => {
                if *taps < MIN_TAPS || taps % 2 == 0 {
                    return bad(format!("taps must be odd and at least {MIN_TAPS}, got {taps}"));
                }
                if bands.is_empty() {
                    return bad("at least one band required".into());
                }
                for band in bands {
                    let (lo, hi) = band.edges();
                    if !(band.width_hz > 0.0 && lo >= 0.0 && hi <= 0.5 * w) {
                        return bad(format!("band [{lo}, {hi}] Hz not within [0, {}] Hz", 0.5 * w));
                    }
                }
            }
            ProcessSpec::White { variance, .. } => {
                if !(variance.is_finite() && *variance > 0.0) {
                    return bad(format!("variance must be positive, got {variance}"));
                }
            }
        }
        Ok(())
    }

    /// FIR applied to unit-variance white noise.
    pub fn filter(&self) -> Vec<f64> {
        let w = self.nyquist_hz();
        let to_rad = |b: &Band| {
            let (lo, hi) = b.edges();
            (2.0 * PI * lo / w, 2.0 * PI * hi / w)
        };
        match self {
            ProcessSpec::MaWithLines { coefficients, .. } => coefficients.clone(),
            ProcessSpec::SparseMultiband { bands, taps, .. } => {
                fir::multiband_bandpass(*taps, &bands.iter().map(to_rad).collect::<Vec<_>>())
            }
            ProcessSpec::Notched { stop_bands, taps, .. } => {
                fir::multiband_bandstop(*taps, &stop_bands.iter().map(to_rad).collect::<Vec<_>>())
            }
            ProcessSpec::White { variance, .. } => vec![variance.sqrt()],
        }
    }

    /// Analytic variance: filter energy plus `A²/2` per line.
    pub fn total_power(&self) -> f64 {
        let filter: f64 = self.filter().iter().map(|h| h * h).sum();
        filter + self.lines().iter().map(|l| 0.5 * l.amplitude * l.amplitude).sum::<f64>()
    }
}

/// Real samples on the Nyquist grid `T = 1/W`.
#[derive(Debug, Clone, PartialEq)]
pub struct NyquistSignal {
    pub samples: Vec<f64>,
    pub rate_hz: f64,
}

impl NyquistSignal {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// One realization of `length` samples, deterministic in `seed`.
pub fn generate(spec: &ProcessSpec, length: usize, seed: u64) -> Result<NyquistSignal> {
    generate_with(spec, length, &mut substream(seed, 0))
}

pub fn generate_with<R: Rng + ?Sized>(spec: &ProcessSpec, length: usize, rng: &mut R) -> Result<NyquistSignal> {
    spec.validate()?;
    if length == 0 {
        return Err(Error::InvalidProcess("length must be at least 1".into()));
    }
    let h = spec.filter();
    let noise: Vec<f64> = (0..length + h.len() - 1).map(|_| StandardNormal.sample(rng)).collect();
    let mut samples = fir::convolve_valid(&noise, &h);
    let phase = Uniform::new(0.0, 2.0 * PI).expect("valid range");
    for line in spec.lines() {
        let phi = phase.sample(rng);
        for (k, x) in samples.iter_mut().enumerate() {
            *x += line.amplitude * (line.frequency * k as f64 + phi).cos();
        }
    }
    Ok(NyquistSignal { samples, rate_hz: spec.nyquist_hz() })
}

/// Column holding normalized frequency `theta` (rad/sample) at resolution `L`.
pub fn column_of_frequency(theta: f64, l: usize) -> usize {
    let m = (theta * l as f64 / (2.0 * PI)).round() as i64;
    let half = (l / 2) as i64;
    let m = (m + half - 1).rem_euclid(l as i64) - half + 1;
    (m + half - 1) as usize
}

/// Exact subband powers `P(m_l)` by adaptive quadrature of `|H(e^{jθ})|²`
/// over each band, plus `A²/4` of each line in each of its two sidebands.
pub fn true_psd(spec: &ProcessSpec, l: usize) -> Result<PsdEstimate> {
    spec.validate()?;
    if l < 2 || !l.is_multiple_of(2) {
        return Err(Error::InvalidPattern(format!("L must be a positive even integer, got {l}")));
    }
    let autocorr = fir::autocorrelation(&spec.filter());
    let tol = 1e-12 * autocorr[0].abs().max(f64::MIN_POSITIVE);
    let width = 2.0 * PI / l as f64;
    let mut values: Vec<f64> = (0..l)
        .map(|col| {
            let center = subband_index(col, l) as f64 * width;
            let lo = center - 0.5 * width;
            quad::integrate(|t| fir::power_response(&autocorr, t), lo, lo + width, tol) / (2.0 * PI)
        })
        .collect();
    for line in spec.lines() {
        let power = 0.25 * line.amplitude * line.amplitude;
        values[column_of_frequency(line.frequency, l)] += power;
        values[column_of_frequency(-line.frequency, l)] += power;
    }
    Ok(PsdEstimate::new(values, spec.nyquist_hz()))
}
