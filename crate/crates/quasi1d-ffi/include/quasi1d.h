#ifndef QUASI1D_H
#define QUASI1D_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum q1d_status {
  Q1D_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  Q1D_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  Q1D_STATUS_INVALID_UTF8 = 2,
  /**
   * Configuration parsing or validation failed.
   */
  Q1D_STATUS_CONFIG = 3,
  /**
   * A computation failed (pole, defective matrix, overflow, ...).
   */
  Q1D_STATUS_COMPUTE = 4,
  /**
   * File output failed.
   */
  Q1D_STATUS_IO = 5,
  /**
   * An index or preset name was out of range.
   */
  Q1D_STATUS_OUT_OF_RANGE = 6,
  /**
   * An internal panic was caught at the FFI boundary.
   */
  Q1D_STATUS_PANIC = 7,
} q1d_status;

/**
 * Opaque scenario handle: a validated configuration plus its label.
 */
typedef struct Q1dScenario Q1dScenario;

/**
 * Opaque spectrum handle.
 */
typedef struct Q1dSpectrum Q1dSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread (empty string if none). The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *q1d_last_error_message(void);

/**
 * Parse and validate a scenario configuration from a JSON document.
 *
 * # Safety
 * `json` and `label` must be NUL-terminated strings; `out` must point to
 * writable storage for one pointer.
 */
enum q1d_status q1d_scenario_from_json(const char *json,
                                       const char *label,
                                       struct Q1dScenario **out);

/**
 * Number of runs a preset expands to (0 for unknown names).
 *
 * # Safety
 * `name` must be a NUL-terminated string or NULL.
 */
uintptr_t q1d_preset_run_count(const char *name);

/**
 * Instantiate one run of a named preset (index < q1d_preset_run_count).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must point to writable
 * storage for one pointer.
 */
enum q1d_status q1d_scenario_from_preset(const char *name,
                                         uintptr_t index,
                                         struct Q1dScenario **out);

/**
 * The scenario's label (borrowed bytes, not NUL-terminated; valid while the
 * scenario lives).
 *
 * # Safety
 * All pointers must be non-NULL; `scenario` must be a live handle.
 */
enum q1d_status q1d_scenario_label(const struct Q1dScenario *scenario,
                                   const char **out,
                                   uintptr_t *out_len);

/**
 * Execute every analysis of the scenario, writing CSV and metadata files
 * into `out_dir` (created if missing).
 *
 * # Safety
 * `scenario` must be a live handle; `out_dir` a NUL-terminated path.
 */
enum q1d_status q1d_scenario_run(const struct Q1dScenario *scenario, const char *out_dir);

/**
 * Compute the scenario's transmission/reflection spectrum in memory.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must point to writable storage
 * for one pointer.
 */
enum q1d_status q1d_scenario_spectrum(const struct Q1dScenario *scenario, struct Q1dSpectrum **out);

/**
 * Number of grid points in a spectrum (0 for NULL).
 *
 * # Safety
 * `spectrum` must be a live handle or NULL.
 */
uintptr_t q1d_spectrum_len(const struct Q1dSpectrum *spectrum);

/**
 * Whether the spectrum carries reflection data.
 *
 * # Safety
 * `spectrum` must be a live handle or NULL.
 */
bool q1d_spectrum_has_reflection(const struct Q1dSpectrum *spectrum);

/**
 * One spectrum row: detuning, complex t/t₀, and complex r (0 when absent).
 * NULL output pointers are skipped.
 *
 * # Safety
 * `spectrum` must be a live handle; non-NULL output pointers must point to
 * writable doubles.
 */
enum q1d_status q1d_spectrum_row(const struct Q1dSpectrum *spectrum,
                                 uintptr_t index,
                                 double *delta_a,
                                 double *t_re,
                                 double *t_im,
                                 double *r_re,
                                 double *r_im);

/**
 * Release a spectrum handle (NULL is a no-op).
 *
 * # Safety
 * `spectrum` must come from this library and not have been freed already.
 */
void q1d_spectrum_free(struct Q1dSpectrum *spectrum);

/**
 * Release a scenario handle (NULL is a no-op).
 *
 * # Safety
 * `scenario` must come from this library and not have been freed already.
 */
void q1d_scenario_free(struct Q1dScenario *scenario);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASI1D_H */
