#ifndef GMA_FFI_H
#define GMA_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GmaStatus {
  GMA_STATUS_OK = 0,
  GMA_STATUS_MALFORMED = 1,
  GMA_STATUS_INADMISSIBLE_PHASE = 2,
  GMA_STATUS_CONTINUATION_STUCK = 3,
  GMA_STATUS_FAIL = 4,
  GMA_STATUS_BOUNDARY = 5,
  GMA_STATUS_NULL_POINTER = 10,
  GMA_STATUS_INVALID_UTF8 = 11,
  GMA_STATUS_BUFFER_TOO_SMALL = 12,
  GMA_STATUS_UNKNOWN_COMMAND = 13,
  GMA_STATUS_PANIC = 14,
} GmaStatus;

/**
 * Report of a command run through the JSON interface.
 */
typedef struct GmaReport GmaReport;

/**
 * Flat-torus problem `σ_n(Ω + i∂∂̄φ) = Σ γ_k σ_k` with `Ω = s·ω` and
 * constant canonical `γ`.
 */
typedef struct GmaSolver GmaSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gma_version(void);

/**
 * Message for the last non-OK status on this thread, or NULL.
 */
const char *gma_last_error(void);

/**
 * dHYM coefficients `c_0..c_{n-1}` and the leading coefficient `kappa`.
 *
 * `out_c` must hold at least `n` values; `out_kappa` may be NULL.
 *
 * # Safety
 * `out_c` must be valid for `out_len` writes and `out_kappa` NULL or valid.
 */
enum GmaStatus gma_dhym_coefficients(size_t n,
                                     double theta_hat,
                                     double *out_c,
                                     size_t out_len,
                                     double *out_kappa);

/**
 * `σ_0..σ_n` of `lambda[0..n]`; `out` must hold `n + 1` values.
 *
 * # Safety
 * `lambda` must be valid for `n` reads and `out` for `out_len` writes.
 */
enum GmaStatus gma_sigma(const double *lambda, size_t n, double *out, size_t out_len);

/**
 * Cone margins of the canonical equation `σ_n = Σ γ_k σ_k` at `lambda`.
 * Returns [`GmaStatus::Fail`] if some margin is not positive; the margins
 * are written either way.
 *
 * # Safety
 * `lambda` and `gamma` must be valid for `n` reads and `out` for `out_len`
 * writes.
 */
enum GmaStatus gma_cone_margins(const double *lambda,
                                const double *gamma,
                                size_t n,
                                double *out,
                                size_t out_len);

/**
 * Runs `command` (`"coeffs"`, `"check-cone"`, `"solve"` or `"toric"`) on a
 * JSON configuration and stores the report in `*out`.
 *
 * The returned status is the command's verdict; a report is produced for
 * every status below 10.
 *
 * # Safety
 * `command` and `config` must be NUL-terminated strings and `out` a valid
 * pointer.
 */
enum GmaStatus gma_run_json(const char *command, const char *config, struct GmaReport **out);

/**
 * The report as a NUL-terminated JSON string owned by `report`.
 *
 * # Safety
 * `report` must be NULL or a live handle from [`gma_run_json`].
 */
const char *gma_report_json(const struct GmaReport *report);

/**
 * The verdict stored in `report`.
 *
 * # Safety
 * `report` must be NULL or a live handle from [`gma_run_json`].
 */
enum GmaStatus gma_report_status(const struct GmaReport *report);

/**
 * # Safety
 * `report` must be NULL or a handle from [`gma_run_json`] not yet freed.
 */
void gma_report_free(struct GmaReport *report);

/**
 * Creates a solver on the `n`-dimensional torus with `grid_size` points per
 * real axis. `gamma` holds `n` canonical coefficients.
 *
 * # Safety
 * `gamma` must be valid for `gamma_len` reads and `out` a valid pointer.
 */
enum GmaStatus gma_solver_new(size_t n,
                              size_t grid_size,
                              double background_scale,
                              const double *gamma,
                              size_t gamma_len,
                              struct GmaSolver **out);

/**
 * Runs the continuity method with `steps` initial τ-steps. `tol <= 0`
 * selects the default tolerance. On [`GmaStatus::ContinuationStuck`] the
 * last accepted potential is kept.
 *
 * # Safety
 * `solver` must be a live handle from [`gma_solver_new`].
 */
enum GmaStatus gma_solver_solve(struct GmaSolver *solver, size_t steps, double tol);

/**
 * Number of grid points, `grid_size^(2n)`.
 *
 * # Safety
 * `solver` must be NULL or a live handle.
 */
size_t gma_solver_len(const struct GmaSolver *solver);

/**
 * Copies the current potential (mean zero, last axis fastest) into `out`.
 *
 * # Safety
 * `solver` must be a live handle and `out` valid for `out_len` writes.
 */
enum GmaStatus gma_solver_copy_phi(const struct GmaSolver *solver, double *out, size_t out_len);

/**
 * Sup-norm residual and minimum cone margin of the current potential.
 *
 * # Safety
 * `solver` must be a live handle; the output pointers may be NULL.
 */
enum GmaStatus gma_solver_diagnostics(const struct GmaSolver *solver,
                                      double *residual_sup,
                                      double *cone_margin_min);

/**
 * # Safety
 * `solver` must be NULL or a handle from [`gma_solver_new`] not yet freed.
 */
void gma_solver_free(struct GmaSolver *solver);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMA_FFI_H */
