#ifndef PARETO_TAIL_H
#define PARETO_TAIL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PtStatus {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside its domain (tail value not in (0,1), α ≤ 0, bad level).
   */
  PT_STATUS_DOMAIN = 2,
  /**
   * Non-positive or non-finite observations, or fewer than two.
   */
  PT_STATUS_INVALID_SAMPLE = 3,
  /**
   * Too few exceedances for the requested quantity.
   */
  PT_STATUS_INSUFFICIENT_DATA = 4,
  /**
   * Tail value outside what the inversion bracket attains.
   */
  PT_STATUS_OUT_OF_BRACKET = 5,
  /**
   * Quadrature failure, unstable bootstrap and other numeric failures.
   */
  PT_STATUS_NUMERIC = 6,
  PT_STATUS_BUFFER_TOO_SMALL = 7,
  PT_STATUS_PANIC = 8,
} PtStatus;

typedef enum PtMethod {
  PT_METHOD_UNBIASED = 0,
  PT_METHOD_JACKKNIFE = 1,
  PT_METHOD_BOOTSTRAP = 2,
} PtMethod;

/**
 * Opaque sorted sample.
 */
typedef struct PtSample PtSample;

/**
 * Variance estimator selection; `bootstrap_reps` and `seed` are read only
 * for [`PtMethod::Bootstrap`].
 */
typedef struct PtMethodSpec {
  enum PtMethod method;
  uint32_t bootstrap_reps;
  uint64_t seed;
} PtMethodSpec;

typedef struct PtInterval {
  double t_hat;
  double lo;
  double hi;
  double sigma_hat;
} PtInterval;

/**
 * One tail-plot point; `sigma_hat` is NaN and `lo == hi == t_hat` where the
 * variance estimator is undefined.
 */
typedef struct PtCurvePoint {
  double u;
  size_t m;
  double t_hat;
  double lo;
  double hi;
  double sigma_hat;
} PtCurvePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies `len` values into a new sample.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum PtStatus pt_sample_new(const double *values, size_t len, struct PtSample **out);

/**
 * Releases a sample; null is ignored.
 *
 * # Safety
 * `sample` must come from [`pt_sample_new`] and not be used afterwards.
 */
void pt_sample_free(struct PtSample *sample);

/**
 * Number of observations; 0 for null.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
size_t pt_sample_len(const struct PtSample *sample);

/**
 * Pareto tail value of tail index `alpha`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PtStatus pt_tail_value(double alpha, double *out);

/**
 * Tail index whose Pareto tail value is `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PtStatus pt_alpha_for(double t, double *out);

/**
 * Estimate at threshold `u` and the number of exceedances.
 *
 * # Safety
 * `sample` must be a live handle; `t_hat` and `m` must be writable.
 */
enum PtStatus pt_estimate(const struct PtSample *sample, double u, double *t_hat, size_t *m);

/**
 * Confidence interval at threshold `u`.
 *
 * # Safety
 * `sample` and `method` must be valid; `out` must be writable.
 */
enum PtStatus pt_confidence_interval(const struct PtSample *sample,
                                     double u,
                                     double level,
                                     const struct PtMethodSpec *method,
                                     struct PtInterval *out);

/**
 * Tail plot at the `k_max` smallest order statistics.
 *
 * Writes the number of points to `written`. If `capacity` is too small,
 * nothing is copied, `written` holds the required size and the status is
 * [`PtStatus::BufferTooSmall`].
 *
 * # Safety
 * `out` must have room for `capacity` points (it may be null when
 * `capacity` is 0); `sample` and `method` must be valid.
 */
enum PtStatus pt_curve(const struct PtSample *sample,
                       size_t k_max,
                       double level,
                       const struct PtMethodSpec *method,
                       struct PtCurvePoint *out,
                       size_t capacity,
                       size_t *written);

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to `capacity`. Returns the full length including the NUL, so a
 * call with `capacity` 0 sizes the buffer.
 *
 * # Safety
 * `buf` must have room for `capacity` bytes (or be null with `capacity` 0).
 */
size_t pt_last_error_message(char *buf, size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARETO_TAIL_H */
