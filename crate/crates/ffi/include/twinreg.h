#ifndef TWINREG_H
#define TWINREG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TwinregStatus {
  TWINREG_STATUS_OK = 0,
  TWINREG_STATUS_NULL_ARGUMENT = 1,
  TWINREG_STATUS_INVALID_UTF8 = 2,
  TWINREG_STATUS_IO = 3,
  TWINREG_STATUS_PARSE = 4,
  TWINREG_STATUS_DOMAIN = 5,
  TWINREG_STATUS_SINGULAR_DESIGN = 6,
  TWINREG_STATUS_INSUFFICIENT_DATA = 7,
  TWINREG_STATUS_OUT_OF_RANGE = 8,
  TWINREG_STATUS_PANIC = 9,
} TwinregStatus;

/**
 * Parsed and transformed quarterly data.
 */
typedef struct TwinregFrame TwinregFrame;

/**
 * A fitted OLS model.
 */
typedef struct TwinregOls TwinregOls;

/**
 * One row of the coefficient table.
 */
typedef struct TwinregCoef {
  double estimate;
  double std_error;
  double statistic;
  double p_value;
} TwinregCoef;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next twinreg call on the same thread.
 */
const char *twinreg_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *twinreg_version(void);

/**
 * Load the quarterly CSV at `path` into a new frame.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TwinregStatus twinreg_frame_from_csv(const char *path, struct TwinregFrame **out);

/**
 * Load quarterly CSV text held in memory.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out` must be valid.
 */
enum TwinregStatus twinreg_frame_from_buffer(const uint8_t *data,
                                             uintptr_t len,
                                             struct TwinregFrame **out);

/**
 * # Safety
 * `frame` must come from a twinreg constructor and not be used afterwards. Null is ignored.
 */
void twinreg_frame_free(struct TwinregFrame *frame);

/**
 * Number of complete rows, or 0 for a null frame.
 *
 * # Safety
 * `frame` must be null or a live frame handle.
 */
uintptr_t twinreg_frame_rows(const struct TwinregFrame *frame);

/**
 * Fit the seven-regressor OLS model.
 *
 * # Safety
 * `frame` must be a live frame handle and `out` a valid pointer.
 */
enum TwinregStatus twinreg_ols_fit(const struct TwinregFrame *frame, struct TwinregOls **out);

/**
 * # Safety
 * `ols` must come from [`twinreg_ols_fit`] and not be used afterwards. Null is ignored.
 */
void twinreg_ols_free(struct TwinregOls *ols);

/**
 * Number of coefficients including the intercept, or 0 for a null handle.
 *
 * # Safety
 * `ols` must be null or a live handle.
 */
uintptr_t twinreg_ols_term_count(const struct TwinregOls *ols);

/**
 * Term name at `index`; owned by the handle. Null when out of range.
 *
 * # Safety
 * `ols` must be null or a live handle.
 */
const char *twinreg_ols_term_name(const struct TwinregOls *ols, uintptr_t index);

/**
 * Coefficient row at `index` (0 is the intercept).
 *
 * # Safety
 * `ols` must be a live handle and `out` a valid pointer.
 */
enum TwinregStatus twinreg_ols_term(const struct TwinregOls *ols,
                                    uintptr_t index,
                                    struct TwinregCoef *out);

/**
 * Adjusted R², or NaN for a null handle.
 *
 * # Safety
 * `ols` must be null or a live handle.
 */
double twinreg_ols_adj_r2(const struct TwinregOls *ols);

/**
 * Full JSON report (all sections) with default thresholds.
 * The string is written to `out` and must be released with [`twinreg_string_free`].
 *
 * # Safety
 * `frame` must be a live frame handle and `out` a valid pointer.
 */
enum TwinregStatus twinreg_report_json(const struct TwinregFrame *frame,
                                       uint64_t seed,
                                       uintptr_t draws,
                                       char **out);

/**
 * # Safety
 * `s` must come from a twinreg call that hands over ownership. Null is ignored.
 */
void twinreg_string_free(char *s);

/**
 * Two-sided Student t tail probability P(|T| ≥ |t|).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TwinregStatus twinreg_student_t_sf2(double t, double df, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWINREG_H */
