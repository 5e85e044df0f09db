use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{ConsistencyPoint, ExperimentResult};
use crate::error::Result;
use crate::system::subband_index;
use crate::tradeoff::tradeoff;

/// `bandIndex,m,fLowHz,fHighHz,estimate,reference` with per-band trial means.
pub fn estimates_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("bandIndex,m,fLowHz,fHighHz,estimate,reference\n");
    let est = &result.mean_estimate;
    for l in 0..est.l() {
        let (lo, hi) = est.bounds(l).expect("index within range");
        let m = subband_index(l, est.l());
        writeln!(out, "{l},{m},{lo},{hi},{},{}", est.values()[l], result.reference.values()[l]).unwrap();
    }
    out
}

/// `trial,nse,maxAbsError`.
pub fn metrics_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("trial,nse,maxAbsError\n");
    for t in &result.trials {
        writeln!(out, "{},{},{}", t.trial, t.metrics.normalized_squared_error, t.metrics.max_abs_error).unwrap();
    }
    out
}

pub fn consistency_csv(points: &[ConsistencyPoint]) -> String {
    let mut out = String::from("n,meanSquaredError,stdSquaredError,meanNse\n");
    for p in points {
        writeln!(out, "{},{},{},{}", p.n, p.mean_squared_error, p.std_squared_error, p.mean_nse).unwrap();
    }
    out
}

/// Minimum channel counts, resolution, and average rate at each `L`. The
/// compressive columns are empty when no sparsity is given.
pub fn tradeoff_table(ls: impl IntoIterator<Item = usize>, nyquist_hz: f64, s: Option<usize>) -> String {
    let mut out = String::from("L,minQNoncompressive,minQCompressive,resolutionHz,rateNoncompressiveHz,rateCompressiveHz\n");
    for l in ls {
        let r = tradeoff(l, nyquist_hz, s, None);
        let rate = |q: usize| q as f64 * nyquist_hz / l as f64;
        let (qc, rc) = match r.min_q_compressive {
            Some(q) => (q.to_string(), rate(q).to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{l},{},{qc},{},{},{rc}", r.min_q_noncompressive, r.resolution_hz, rate(r.min_q_noncompressive))
            .unwrap();
    }
    out
}

/// Writes `estimates.csv`, `metrics.csv`, and `summary.json` into `dir`.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("estimates.csv"), estimates_csv(result))?;
    fs::write(dir.join("metrics.csv"), metrics_csv(result))?;
    let summary = serde_json::to_string_pretty(result).map_err(|e| crate::Error::Io(e.to_string()))?;
    fs::write(dir.join("summary.json"), summary + "\n")?;
    Ok(())
}
