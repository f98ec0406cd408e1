#ifndef DNCOUPLING_H
#define DNCOUPLING_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DNC_OK 0

#define DNC_ERR_NULL 1

#define DNC_ERR_DOMAIN 2

#define DNC_ERR_UNKNOWN_MATERIAL 3

#define DNC_ERR_SIZE 4

#define DNC_ERR_DIMENSION 5

#define DNC_ERR_SINGULAR 6

#define DNC_ERR_DEGENERATE 7

#define DNC_ERR_ESTIMATION 8

#define DNC_ERR_PARSE 9

#define DNC_ERR_IO 10

#define DNC_ERR_UTF8 11

/**
 * The output buffer is too small; the required size has been reported.
 */
#define DNC_ERR_BUFFER 12

#define DNC_ERR_PANIC 99

/**
 * Opaque parameter set of the one-dimensional rate formula.
 */
typedef struct DncRateInputs DncRateInputs;

/**
 * Opaque result of a parameter sweep.
 */
typedef struct DncSweepTable DncSweepTable;

/**
 * Values of the rate estimators at one parameter point.
 */
typedef struct DncRateReport {
  double sigma_exact;
  double sigma_schur;
  double beta;
  double delta_r;
  double temporal_limit;
} DncRateReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf`.
 *
 * # Safety
 * `buf` must point to `len` writable bytes or be null; `needed` must be
 * null or valid for writes.
 */
int32_t dnc_last_error_message(char *buf, size_t len, size_t *needed);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dnc_version(void);

/**
 * Unit subdomains with `dx2 = r * dx1`, materials given by preset name
 * (`air`, `water`, `steel`).
 *
 * # Safety
 * `mat1` and `mat2` must be NUL-terminated strings; `out` must be valid
 * for writes. The handle must be released with [`dnc_rate_inputs_free`].
 */
int32_t dnc_rate_inputs_new(double dt,
                            double dx1,
                            double r,
                            const char *mat1,
                            const char *mat2,
                            struct DncRateInputs **out);

/**
 * Explicit node counts, widths and material coefficients.
 *
 * # Safety
 * `out` must be valid for writes.
 */
int32_t dnc_rate_inputs_new_custom(double dt,
                                   size_t n1,
                                   double dx1,
                                   size_t n2,
                                   double dx2,
                                   double lambda1,
                                   double rho1,
                                   double cp1,
                                   double lambda2,
                                   double rho2,
                                   double cp2,
                                   struct DncRateInputs **out);

/**
 * # Safety
 * `h` must be null or a handle from `dnc_rate_inputs_new*` not yet freed.
 */
void dnc_rate_inputs_free(struct DncRateInputs *h);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
int32_t dnc_sigma_exact(const struct DncRateInputs *h, double *out);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
int32_t dnc_rate_report(const struct DncRateInputs *h, struct DncRateReport *out);

/**
 * Runs the Dirichlet-Neumann iteration for one time step and reports the
 * observed rate; `converged` receives 1 or 0.
 *
 * # Safety
 * `h` must be a live handle; `rate` and `converged` valid for writes.
 */
int32_t dnc_observed_rate_1d(const struct DncRateInputs *h,
                             double tol,
                             size_t max_iters,
                             double *rate,
                             int32_t *converged);

/**
 * Parses a sweep spec (`key = value` lines) and runs it. Row-level
 * failures are reported in the table, see [`dnc_sweep_has_errors`].
 *
 * # Safety
 * `spec_text` must be a NUL-terminated string and `out` valid for writes.
 * Release the table with [`dnc_sweep_free`].
 */
int32_t dnc_sweep_run(const char *spec_text, struct DncSweepTable **out);

/**
 * # Safety
 * `h` must be a live table; `rows` valid for writes.
 */
int32_t dnc_sweep_rows(const struct DncSweepTable *h, size_t *rows);

/**
 * Value of mode column `col` (in spec order) at row `row`.
 *
 * # Safety
 * `h` must be a live table; `out` valid for writes.
 */
int32_t dnc_sweep_value(const struct DncSweepTable *h, size_t row, size_t col, double *out);

/**
 * `has_errors` receives 1 when any row carries an error marker.
 *
 * # Safety
 * `h` must be a live table; `has_errors` valid for writes.
 */
int32_t dnc_sweep_has_errors(const struct DncSweepTable *h, int32_t *has_errors);

/**
 * Copies the CSV rendering of the table into `buf`. Call with a null
 * buffer to query the size through `needed`.
 *
 * # Safety
 * `h` must be a live table; `buf` null or `len` writable bytes; `needed`
 * null or valid for writes.
 */
int32_t dnc_sweep_csv(const struct DncSweepTable *h, char *buf, size_t len, size_t *needed);

/**
 * # Safety
 * `h` must be null or a table from [`dnc_sweep_run`] not yet freed.
 */
void dnc_sweep_free(struct DncSweepTable *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DNCOUPLING_H */
