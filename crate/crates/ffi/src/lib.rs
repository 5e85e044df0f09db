//! C interface to `mcpsd`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns an [`McpsdStatus`]; on failure a description is
//! available from [`mcpsd_last_error`] until the next failing call on the same
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use mcpsd::estimator::{assemble_u, solve, SolverMethod};
use mcpsd::patterns::{diagnose, golomb_ruler, random_pattern};
use mcpsd::sampler::{fractional_delay, CosetSampleSet};
use mcpsd::tradeoff::tradeoff;
use mcpsd::{Error, MeasurementSystem, SamplingPattern};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McpsdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidPattern = 3,
    UnknownRulerOrder = 4,
    InsufficientSignal = 5,
    RankDeficient = 6,
    MaxIterations = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McpsdSolver {
    Ls = 0,
    Nnls = 1,
}

/// Sampling pattern handle.
pub struct McpsdPattern(SamplingPattern);

/// Measurement system handle (`Ψ`, `Ψ̃`, and pair ordering for one pattern).
pub struct McpsdSystem(MeasurementSystem);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McpsdDiagnostics {
    pub rank: usize,
    /// Infinite when rank deficient.
    pub condition_number: f64,
    pub full_rank: bool,
    /// `L / (q(q-1)+1)`.
    pub ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McpsdSolveInfo {
    pub residual_norm: f64,
    /// NNLS outer iterations; 0 for LS.
    pub iterations: usize,
    /// Positive NNLS variables at exit; 0 for LS.
    pub active_set_size: usize,
    /// Samples per channel after fractional-delay trimming.
    pub samples_used: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McpsdTradeoff {
    pub l: usize,
    pub min_q_noncompressive: usize,
    /// 0 when no sparsity was given.
    pub min_q_compressive: usize,
    pub resolution_hz: f64,
    /// Average rate at the noncompressive minimum.
    pub rate_noncompressive_hz: f64,
    /// Average rate at the compressive minimum, 0 when no sparsity was given.
    pub rate_compressive_hz: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let msg = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> McpsdStatus {
    match e {
        Error::InvalidPattern(_) | Error::MissingDifference(_) => McpsdStatus::InvalidPattern,
        Error::UnknownRulerOrder(_) => McpsdStatus::UnknownRulerOrder,
        Error::InsufficientSignal { .. } => McpsdStatus::InsufficientSignal,
        Error::RankDeficient { .. } => McpsdStatus::RankDeficient,
        Error::MaxIterationsExceeded(_) => McpsdStatus::MaxIterations,
        Error::LengthMismatch { .. } => McpsdStatus::BufferTooSmall,
        Error::IndexOutOfRange { .. } | Error::InvalidProcess(_) | Error::Config { .. } => {
            McpsdStatus::InvalidArgument
        }
        Error::Io(_) => McpsdStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (McpsdStatus, String)>) -> McpsdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McpsdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            McpsdStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (McpsdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (McpsdStatus, String) {
    (McpsdStatus::NullPointer, format!("{what} is null"))
}

/// Message for the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mcpsd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Pattern with `q` offsets in `0..l`; offsets are sorted internally.
///
/// # Safety
/// `offsets` must point to `q` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_new(
    l: usize,
    offsets: *const usize,
    q: usize,
    out: *mut *mut McpsdPattern,
) -> McpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if offsets.is_null() && q > 0 {
            return Err(null("offsets"));
        }
        let list = if q == 0 { Vec::new() } else { slice::from_raw_parts(offsets, q).to_vec() };
        let p = SamplingPattern::new(l, list).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(McpsdPattern(p)));
        Ok(())
    })
}

/// Tabulated Golomb ruler of the given order used as a pattern at resolution `l`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_ruler(order: usize, l: usize, out: *mut *mut McpsdPattern) -> McpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let ruler = golomb_ruler(order).map_err(lib_err)?;
        let p = SamplingPattern::new(l, ruler.marks).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(McpsdPattern(p)));
        Ok(())
    })
}

/// Uniformly random pattern, deterministic in `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_random(l: usize, q: usize, seed: u64, out: *mut *mut McpsdPattern) -> McpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = random_pattern(l, q, seed).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(McpsdPattern(p)));
        Ok(())
    })
}

/// # Safety
/// `pattern` must be null or a handle from a `mcpsd_pattern_*` constructor
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_free(pattern: *mut McpsdPattern) {
    if !pattern.is_null() {
        drop(Box::from_raw(pattern));
    }
}

/// Channels `q`, or 0 for a null handle.
///
/// # Safety
/// `pattern` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_q(pattern: *const McpsdPattern) -> usize {
    pattern.as_ref().map_or(0, |p| p.0.q())
}

/// Resolution `L`, or 0 for a null handle.
///
/// # Safety
/// `pattern` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_l(pattern: *const McpsdPattern) -> usize {
    pattern.as_ref().map_or(0, |p| p.0.l())
}

/// Copies the sorted offsets into `out`, which must hold at least `q` values.
///
/// # Safety
/// `pattern` must be a live handle and `out` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_offsets(pattern: *const McpsdPattern, out: *mut usize, len: usize) -> McpsdStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let offsets = p.0.offsets();
        if len < offsets.len() {
            return Err((McpsdStatus::BufferTooSmall, format!("need {} slots, have {len}", offsets.len())));
        }
        slice::from_raw_parts_mut(out, offsets.len()).copy_from_slice(offsets);
        Ok(())
    })
}

/// # Safety
/// `pattern` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_pattern_diagnose(pattern: *const McpsdPattern, out: *mut McpsdDiagnostics) -> McpsdStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = diagnose(&p.0);
        *out = McpsdDiagnostics {
            rank: d.rank,
            condition_number: d.condition_number,
            full_rank: d.full_rank,
            ratio: d.ratio,
        };
        Ok(())
    })
}

/// Builds the measurement system of `pattern`; the pattern handle may be
/// freed afterwards.
///
/// # Safety
/// `pattern` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_system_new(pattern: *const McpsdPattern, out: *mut *mut McpsdSystem) -> McpsdStatus {
    guard(|| {
        let p = pattern.as_ref().ok_or_else(|| null("pattern"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(McpsdSystem(MeasurementSystem::new(&p.0))));
        Ok(())
    })
}

/// # Safety
/// `system` must be null or a live handle from [`mcpsd_system_new`].
#[no_mangle]
pub unsafe extern "C" fn mcpsd_system_free(system: *mut McpsdSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Rows of the stacked real system, `q(q-1)+1`; 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_system_rows(system: *const McpsdSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.psi_tilde().nrows())
}

/// Estimates the `L` subband powers from raw channel samples.
///
/// `channels` holds `q` rows of `n` samples each, row-major, in the order of
/// the pattern's sorted offsets. Each channel is fractionally delayed with
/// `half_length` taps per side and trimmed, so `n` must exceed
/// `2 * half_length + 1`. Subband `l` of `out` is centered at frequency index
/// `m = l - L/2 + 1`. `info` may be null.
///
/// # Safety
/// `system` must be a live handle, `channels` must point to `q * n` readable
/// values, `out` to `out_len` writable values, and `info` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_estimate(
    system: *const McpsdSystem,
    channels: *const f64,
    n: usize,
    half_length: usize,
    solver: McpsdSolver,
    out: *mut f64,
    out_len: usize,
    info: *mut McpsdSolveInfo,
) -> McpsdStatus {
    guard(|| {
        let sys = &system.as_ref().ok_or_else(|| null("system"))?.0;
        if channels.is_null() {
            return Err(null("channels"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let pattern = sys.pattern();
        let (q, l) = (pattern.q(), pattern.l());
        if out_len < l {
            return Err((McpsdStatus::BufferTooSmall, format!("need {l} output slots, have {out_len}")));
        }
        let data = slice::from_raw_parts(channels, q * n);
        if data.iter().any(|x| !x.is_finite()) {
            return Err((McpsdStatus::InvalidArgument, "channel samples must be finite".into()));
        }
        let set = CosetSampleSet { pattern: pattern.clone(), y: data.chunks_exact(n.max(1)).map(<[f64]>::to_vec).collect() };
        let delayed = fractional_delay(&set, half_length).map_err(lib_err)?;
        let u = assemble_u(&delayed, sys.ordering()).map_err(lib_err)?;
        let method = match solver {
            McpsdSolver::Ls => SolverMethod::Ls,
            McpsdSolver::Nnls => SolverMethod::Nnls,
        };
        let report = solve(sys, &u, method).map_err(lib_err)?;
        slice::from_raw_parts_mut(out, l).copy_from_slice(report.estimate.values());
        if let Some(info) = info.as_mut() {
            *info = McpsdSolveInfo {
                residual_norm: report.residual_norm,
                iterations: report.iterations.unwrap_or(0),
                active_set_size: report.active_set_size.unwrap_or(0),
                samples_used: delayed.m(),
            };
        }
        Ok(())
    })
}

/// Channel-count and rate arithmetic at resolution `l`. Pass `sparsity = 0`
/// to skip the compressive columns.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcpsd_tradeoff(l: usize, nyquist_hz: f64, sparsity: usize, out: *mut McpsdTradeoff) -> McpsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if l < 2 || !(nyquist_hz.is_finite() && nyquist_hz > 0.0) {
            return Err((McpsdStatus::InvalidArgument, "need l >= 2 and a positive Nyquist rate".into()));
        }
        let s = (sparsity > 0).then_some(sparsity);
        let r = tradeoff(l, nyquist_hz, s, None);
        let rate = |q: usize| q as f64 * nyquist_hz / l as f64;
        let qc = r.min_q_compressive.unwrap_or(0);
        *out = McpsdTradeoff {
            l,
            min_q_noncompressive: r.min_q_noncompressive,
            min_q_compressive: qc,
            resolution_hz: r.resolution_hz,
            rate_noncompressive_hz: rate(r.min_q_noncompressive),
            rate_compressive_hz: if qc > 0 { rate(qc) } else { 0.0 },
        };
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mcpsd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
