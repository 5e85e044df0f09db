//! Monte Carlo experiments: configuration, presets, orchestration, and CSV output.
//!
//! Seeding: trial `t` draws its realization from substream `t` of the master
//! seed, so adding trials never changes earlier ones. Random sampling patterns
//! come from substreams at [`PATTERN_STREAM_BASE`]` + attempt`.

mod output;
mod presets;

pub use output::{consistency_csv, estimates_csv, metrics_csv, tradeoff_table, write_outputs};
pub use presets::{preset, PRESET_NAMES};

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{assemble_u, solve, SolverMethod};
use crate::patterns::{diagnose, golomb_ruler, random_pattern_with, PatternDiagnostics};
use crate::reference::{metrics, welch_subbands, ErrorMetrics};
use crate::rng::{substream, PATTERN_STREAM_BASE};
use crate::sampler::{coset_sample, fractional_delay, required_length, DEFAULT_HALF_LENGTH};
use crate::synth::{generate_with, true_psd, ProcessSpec};
use crate::system::{MeasurementSystem, PsdEstimate, SamplingPattern};
use crate::tradeoff::{tradeoff, TradeoffReport};

/// Redraws allowed when a random pattern must give a full-rank system.
pub const MAX_PATTERN_ATTEMPTS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum PatternSource {
    /// Uniform draw; `seed` defaults to the experiment seed.
    Random {
        #[serde(default)]
        seed: Option<u64>,
    },
    Ruler {
        order: usize,
    },
    Explicit {
        offsets: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Rectangular-window Welch estimate of each trial's own realization.
    Welch,
    /// Quadrature of the process's exact spectrum.
    True,
}

fn default_trials() -> usize {
    100
}

fn default_half_length() -> usize {
    DEFAULT_HALF_LENGTH
}

fn default_reference() -> ReferenceKind {
    ReferenceKind::Welch
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub process: ProcessSpec,
    pub pattern: PatternSource,
    /// Resolution (columns of `Ψ`).
    pub l: usize,
    /// Channels.
    pub q: usize,
    /// Samples per channel entering the correlation estimate.
    pub n: usize,
    pub solver: SolverMethod,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_reference")]
    pub reference: ReferenceKind,
    /// Fractional-delay taps per side.
    #[serde(default = "default_half_length")]
    pub half_length: usize,
    /// Output directory for CSV files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.l;
        if l < 2 || !l.is_multiple_of(2) {
            return Err(Error::config("l", format!("must be a positive even integer, got {l}")));
        }
        if self.q < 2 || self.q > l {
            return Err(Error::config("q", format!("must lie in 2..={l}, got {}", self.q)));
        }
        if self.n < 2 {
            return Err(Error::config("n", "need at least 2 samples per channel"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        match &self.pattern {
            PatternSource::Random { .. } => {}
            PatternSource::Ruler { order } => {
                let ruler = golomb_ruler(*order).map_err(|e| Error::config("pattern.order", e.to_string()))?;
                if ruler.order != self.q {
                    return Err(Error::config("q", format!("ruler of order {order} gives {order} channels, not {}", self.q)));
                }
                if ruler.marks.iter().any(|&m| m >= l) {
                    return Err(Error::config("pattern.order", format!("ruler marks reach {} >= L = {l}", ruler.length)));
                }
            }
            PatternSource::Explicit { offsets } => {
                if offsets.len() != self.q {
                    return Err(Error::config("pattern.offsets", format!("{} offsets for q = {}", offsets.len(), self.q)));
                }
                SamplingPattern::new(l, offsets.clone()).map_err(|e| Error::config("pattern.offsets", e.to_string()))?;
            }
        }
        self.process.validate().map_err(|e| Error::config("process", e.to_string()))
    }

    /// Resolves the configured pattern. Random patterns used with the LS
    /// solver are redrawn until `Ψ̃` has full column rank.
    pub fn build_pattern(&self) -> Result<SamplingPattern> {
        match &self.pattern {
            PatternSource::Ruler { order } => SamplingPattern::new(self.l, golomb_ruler(*order)?.marks),
            PatternSource::Explicit { offsets } => SamplingPattern::new(self.l, offsets.clone()),
            PatternSource::Random { seed } => {
                let seed = seed.unwrap_or(self.seed);
                let mut last = None;
                for attempt in 0..MAX_PATTERN_ATTEMPTS {
                    let p = random_pattern_with(&mut substream(seed, PATTERN_STREAM_BASE + attempt), self.l, self.q)?;
                    if self.solver == SolverMethod::Nnls {
                        return Ok(p);
                    }
                    let d = diagnose(&p);
                    if d.full_rank {
                        return Ok(p);
                    }
                    last = Some(d.rank);
                }
                Err(Error::RankDeficient { rank: last.unwrap_or(0), columns: self.l })
            }
        }
    }

    /// Nyquist samples generated per trial: `N + 2K` channel samples survive
    /// the delay filter's trimming as `N`.
    pub fn signal_length(&self, pattern: &SamplingPattern) -> usize {
        required_length(pattern, self.n + 2 * self.half_length)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub metrics: ErrorMetrics,
    pub residual_norm: f64,
    #[serde(skip)]
    pub estimate: Vec<f64>,
    #[serde(skip)]
    pub reference: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub pattern: SamplingPattern,
    pub trials: Vec<TrialResult>,
    /// Per-band mean over trials.
    pub mean_estimate: PsdEstimate,
    /// Per-band mean reference over trials (constant for the exact reference).
    pub reference: PsdEstimate,
    pub diagnostics: PatternDiagnostics,
    pub tradeoff: TradeoffReport,
    pub mean_nse: f64,
    pub std_nse: f64,
    pub mean_squared_error: f64,
    pub std_squared_error: f64,
    pub wall_clock_seconds: f64,
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = if n > 1.0 { xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn run_trial(
    config: &ExperimentConfig,
    system: &MeasurementSystem,
    exact: Option<&PsdEstimate>,
    trial: usize,
) -> Result<TrialResult> {
    let pattern = system.pattern();
    let signal = generate_with(&config.process, config.signal_length(pattern), &mut substream(config.seed, trial as u64))?;
    let channels = coset_sample(&signal, pattern, config.n + 2 * config.half_length)?;
    let delayed = fractional_delay(&channels, config.half_length)?;
    let u = assemble_u(&delayed, system.ordering())?;
    let report = solve(system, &u, config.solver)?;
    let reference = match exact {
        Some(r) => r.values().to_vec(),
        None => welch_subbands(&signal, config.l)?.into_values(),
    };
    let estimate = report.estimate.into_values();
    Ok(TrialResult {
        trial,
        metrics: metrics(&estimate, &reference)?,
        residual_norm: report.residual_norm,
        estimate,
        reference,
    })
}

/// Runs every trial of `config`, concurrently on the current rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let start = Instant::now();
    let pattern = config.build_pattern()?;
    let system = MeasurementSystem::new(&pattern);
    let exact = match config.reference {
        ReferenceKind::True => Some(true_psd(&config.process, config.l)?),
        ReferenceKind::Welch => None,
    };
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, &system, exact.as_ref(), t))
        .collect::<Result<Vec<_>>>()?;

    let w = config.process.nyquist_hz();
    let count = trials.len() as f64;
    let band_mean = |pick: fn(&TrialResult) -> &Vec<f64>| {
        let mut acc = vec![0.0; config.l];
        for t in &trials {
            acc.iter_mut().zip(pick(t)).for_each(|(a, v)| *a += v);
        }
        PsdEstimate::new(acc.into_iter().map(|a| a / count).collect(), w)
    };
    let mean_estimate = band_mean(|t| &t.estimate);
    let reference = band_mean(|t| &t.reference);
    let (mean_nse, std_nse) = mean_std(trials.iter().map(|t| t.metrics.normalized_squared_error));
    let (mean_squared_error, std_squared_error) = mean_std(trials.iter().map(|t| t.metrics.mean_squared_error));
    Ok(ExperimentResult {
        diagnostics: diagnose(&pattern),
        tradeoff: tradeoff(config.l, w, None, Some(config.q)),
        config: config.clone(),
        pattern,
        trials,
        mean_estimate,
        reference,
        mean_nse,
        std_nse,
        mean_squared_error,
        std_squared_error,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Same as [`run_experiment`] with at most `jobs` worker threads.
pub fn run_experiment_with_jobs(config: &ExperimentConfig, jobs: Option<usize>) -> Result<ExperimentResult> {
    with_jobs(jobs, || run_experiment(config))
}

/// Runs `f` on a dedicated pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => f(),
        Some(0) => Err(Error::config("jobs", "must be at least 1")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::config("jobs", e.to_string()))?
            .install(f),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyPoint {
    pub n: usize,
    pub mean_squared_error: f64,
    pub std_squared_error: f64,
    pub mean_nse: f64,
}

/// One experiment per entry of `ns` (strictly increasing), all other settings
/// shared with `config`.
pub fn consistency_curve(config: &ExperimentConfig, ns: &[usize]) -> Result<Vec<ConsistencyPoint>> {
    if ns.is_empty() {
        return Err(Error::config("n", "need at least one sample count"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("n", "sample counts must be strictly increasing"));
    }
    ns.iter()
        .map(|&n| {
            let r = run_experiment(&ExperimentConfig { n, ..config.clone() })?;
            Ok(ConsistencyPoint {
                n,
                mean_squared_error: r.mean_squared_error,
                std_squared_error: r.std_squared_error,
                mean_nse: r.mean_nse,
            })
        })
        .collect()
}
