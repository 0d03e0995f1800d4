#ifndef SGN_H
#define SGN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgnStatus {
  SGN_STATUS_OK = 0,
  SGN_STATUS_NULL_POINTER = 1,
  SGN_STATUS_INVALID_ARGUMENT = 2,
  SGN_STATUS_UNKNOWN_SCENARIO = 3,
  SGN_STATUS_SOLVER_FAILURE = 4,
  SGN_STATUS_IO = 5,
  SGN_STATUS_BUFFER_TOO_SMALL = 6,
  SGN_STATUS_PANIC = 7,
} SgnStatus;

/**
 * Opaque simulation handle.
 */
typedef struct SgnSimulation SgnSimulation;

/**
 * Overrides applied to a built-in scenario. Zero (or a negative value for
 * `degree`) keeps the scenario's own setting.
 */
typedef struct SgnOptions {
  uint32_t cells_x;
  uint32_t cells_y;
  int32_t degree;
  double c;
  double cfl;
} SgnOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *sgn_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sgn_version(void);

uint32_t sgn_scenario_count(void);

/**
 * Name of built-in scenario `index` as a static string, or null when out of
 * range.
 */
const char *sgn_scenario_name(uint32_t index);

struct SgnOptions sgn_options_default(void);

/**
 * Builds the initial state of a built-in scenario. `options` may be null.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `options` null or valid, and
 * `out_sim` a valid pointer.
 */
enum SgnStatus sgn_simulation_new(const char *name,
                                  const struct SgnOptions *options,
                                  struct SgnSimulation **out_sim);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sim` must come from [`sgn_simulation_new`] and not be used afterwards.
 */
void sgn_simulation_free(struct SgnSimulation *sim);

/**
 * Advances by one step of at most `dt_max` (the stable step when
 * `dt_max <= 0`), then applies relaxation zones. The step taken is written to
 * `out_dt` when it is not null.
 *
 * # Safety
 * `sim` must be a live handle; `out_dt` null or valid.
 */
enum SgnStatus sgn_simulation_step(struct SgnSimulation *sim, double dt_max, double *out_dt);

/**
 * Advances with stable steps until `t_target`, landing on it exactly.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum SgnStatus sgn_simulation_advance_to(struct SgnSimulation *sim, double t_target);

/**
 * Time, step count, mass and energy of the current state. Any output pointer
 * may be null.
 *
 * # Safety
 * `sim` must be a live handle; outputs null or valid.
 */
enum SgnStatus sgn_simulation_stats(const struct SgnSimulation *sim,
                                    double *out_time,
                                    uint64_t *out_steps,
                                    double *out_mass,
                                    double *out_energy);

/**
 * Depth and free surface at `(x, y)`; `y` is ignored in 1D.
 *
 * # Safety
 * `sim` must be a live handle; both outputs valid.
 */
enum SgnStatus sgn_simulation_sample(const struct SgnSimulation *sim,
                                     double x,
                                     double y,
                                     double *out_h,
                                     double *out_eta);

/**
 * Free-surface profile as interleaved `(x, eta)` pairs along the line `y`
 * (ignored in 1D). `out_len` receives the number of pairs. With a null
 * `buffer` only the length is reported; a buffer shorter than
 * `2 * out_len` values gives [`SgnStatus::BufferTooSmall`].
 *
 * # Safety
 * `sim` must be a live handle, `buffer` null or valid for `capacity`
 * doubles, `out_len` valid.
 */
enum SgnStatus sgn_simulation_profile(const struct SgnSimulation *sim,
                                      double y,
                                      double *buffer,
                                      size_t capacity,
                                      size_t *out_len);

/**
 * Integrates the solitary-wave profile and writes it to `path` as CSV.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum SgnStatus sgn_export_soliton(double h0,
                                  double amplitude,
                                  double g,
                                  double c,
                                  const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGN_H */
