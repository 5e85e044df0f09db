#ifndef MCPSD_H
#define MCPSD_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum McpsdStatus {
  MCPSD_STATUS_OK = 0,
  MCPSD_STATUS_NULL_POINTER = 1,
  MCPSD_STATUS_INVALID_ARGUMENT = 2,
  MCPSD_STATUS_INVALID_PATTERN = 3,
  MCPSD_STATUS_UNKNOWN_RULER_ORDER = 4,
  MCPSD_STATUS_INSUFFICIENT_SIGNAL = 5,
  MCPSD_STATUS_RANK_DEFICIENT = 6,
  MCPSD_STATUS_MAX_ITERATIONS = 7,
  MCPSD_STATUS_BUFFER_TOO_SMALL = 8,
  MCPSD_STATUS_INTERNAL = 9,
} McpsdStatus;

typedef enum McpsdSolver {
  MCPSD_SOLVER_LS = 0,
  MCPSD_SOLVER_NNLS = 1,
} McpsdSolver;

// Sampling pattern handle.
typedef struct McpsdPattern McpsdPattern;

// Measurement system handle (`Ψ`, `Ψ̃`, and pair ordering for one pattern).
typedef struct McpsdSystem McpsdSystem;

typedef struct McpsdDiagnostics {
  size_t rank;
  // Infinite when rank deficient.
  double condition_number;
  bool full_rank;
  // `L / (q(q-1)+1)`.
  double ratio;
} McpsdDiagnostics;

typedef struct McpsdSolveInfo {
  double residual_norm;
  // NNLS outer iterations; 0 for LS.
  size_t iterations;
  // Positive NNLS variables at exit; 0 for LS.
  size_t active_set_size;
  // Samples per channel after fractional-delay trimming.
  size_t samples_used;
} McpsdSolveInfo;

typedef struct McpsdTradeoff {
  size_t l;
  size_t min_q_noncompressive;
  // 0 when no sparsity was given.
  size_t min_q_compressive;
  double resolution_hz;
  // Average rate at the noncompressive minimum.
  double rate_noncompressive_hz;
  // Average rate at the compressive minimum, 0 when no sparsity was given.
  double rate_compressive_hz;
} McpsdTradeoff;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *mcpsd_last_error(void);

// Pattern with `q` offsets in `0..l`; offsets are sorted internally.
//
// # Safety
// `offsets` must point to `q` readable values and `out` must be writable.
enum McpsdStatus mcpsd_pattern_new(size_t l,
                                   const size_t *offsets,
                                   size_t q,
                                   struct McpsdPattern **out);

// Tabulated Golomb ruler of the given order used as a pattern at resolution `l`.
//
// # Safety
// `out` must be writable.
enum McpsdStatus mcpsd_pattern_ruler(size_t order, size_t l, struct McpsdPattern **out);

// Uniformly random pattern, deterministic in `seed`.
//
// # Safety
// `out` must be writable.
enum McpsdStatus mcpsd_pattern_random(size_t l, size_t q, uint64_t seed, struct McpsdPattern **out);

// # Safety
// `pattern` must be null or a handle from a `mcpsd_pattern_*` constructor
// that has not been freed.
void mcpsd_pattern_free(struct McpsdPattern *pattern);

// Channels `q`, or 0 for a null handle.
//
// # Safety
// `pattern` must be null or a live handle.
size_t mcpsd_pattern_q(const struct McpsdPattern *pattern);

// Resolution `L`, or 0 for a null handle.
//
// # Safety
// `pattern` must be null or a live handle.
size_t mcpsd_pattern_l(const struct McpsdPattern *pattern);

// Copies the sorted offsets into `out`, which must hold at least `q` values.
//
// # Safety
// `pattern` must be a live handle and `out` must point to `len` writable values.
enum McpsdStatus mcpsd_pattern_offsets(const struct McpsdPattern *pattern, size_t *out, size_t len);

// # Safety
// `pattern` must be a live handle and `out` writable.
enum McpsdStatus mcpsd_pattern_diagnose(const struct McpsdPattern *pattern,
                                        struct McpsdDiagnostics *out);

// Builds the measurement system of `pattern`; the pattern handle may be
// freed afterwards.
//
// # Safety
// `pattern` must be a live handle and `out` writable.
enum McpsdStatus mcpsd_system_new(const struct McpsdPattern *pattern, struct McpsdSystem **out);

// # Safety
// `system` must be null or a live handle from [`mcpsd_system_new`].
void mcpsd_system_free(struct McpsdSystem *system);

// Rows of the stacked real system, `q(q-1)+1`; 0 for a null handle.
//
// # Safety
// `system` must be null or a live handle.
size_t mcpsd_system_rows(const struct McpsdSystem *system);

// Estimates the `L` subband powers from raw channel samples.
//
// `channels` holds `q` rows of `n` samples each, row-major, in the order of
// the pattern's sorted offsets. Each channel is fractionally delayed with
// `half_length` taps per side and trimmed, so `n` must exceed
// `2 * half_length + 1`. Subband `l` of `out` is centered at frequency index
// `m = l - L/2 + 1`. `info` may be null.
//
// # Safety
// `system` must be a live handle, `channels` must point to `q * n` readable
// values, `out` to `out_len` writable values, and `info` must be null or
// writable.
enum McpsdStatus mcpsd_estimate(const struct McpsdSystem *system,
                                const double *channels,
                                size_t n,
                                size_t half_length,
                                enum McpsdSolver solver,
                                double *out,
                                size_t out_len,
                                struct McpsdSolveInfo *info);

// Channel-count and rate arithmetic at resolution `l`. Pass `sparsity = 0`
// to skip the compressive columns.
//
// # Safety
// `out` must be writable.
enum McpsdStatus mcpsd_tradeoff(size_t l,
                                double nyquist_hz,
                                size_t sparsity,
                                struct McpsdTradeoff *out);

// Library version as a static NUL-terminated string.
const char *mcpsd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCPSD_H */
