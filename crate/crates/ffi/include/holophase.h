#ifndef HOLOPHASE_H
#define HOLOPHASE_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `HP_STATUS_OK` is zero.
 */
typedef enum HpStatus {
  HP_STATUS_OK = 0,
  HP_STATUS_NULL_POINTER = 1,
  HP_STATUS_DOMAIN = 2,
  HP_STATUS_UNSUPPORTED_DEGREE = 3,
  HP_STATUS_OUT_OF_REGION = 4,
  HP_STATUS_DEGENERATE_DIRECTION = 5,
  HP_STATUS_DEGENERATE_TAU = 6,
  HP_STATUS_OUT_OF_ZONE = 7,
  HP_STATUS_MEASUREMENT = 8,
  HP_STATUS_INVALID_PLAN = 9,
  HP_STATUS_NO_ADMISSIBLE_DIRECTION = 10,
  HP_STATUS_CONFIG = 11,
  HP_STATUS_IO = 12,
  HP_STATUS_REPORT = 13,
  HP_STATUS_INDEX_OUT_OF_RANGE = 14,
  HP_STATUS_PANIC = 15,
} HpStatus;

/**
 * Opaque recovery result.
 */
typedef struct HpReport HpReport;

/**
 * Opaque plane wave plus multipole radiation solution.
 */
typedef struct HpScene HpScene;

/**
 * Sampling plan. `tau <= 0` selects the automatic offset; `tolerance <= 0`
 * selects the library default.
 */
typedef struct HpPlan {
  const double *s_grid;
  size_t s_len;
  double tau;
  size_t order;
  bool richardson;
  bool phase_lock;
  double tolerance;
  double near_zone;
  bool joint_refit;
} HpPlan;

/**
 * Intensity callback: writes `|ψ(x)|²` to `out` and returns 0 on success.
 */
typedef int32_t (*HpIntensityFn)(void *ctx, const double *x, double *out);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hp_last_error_message(void);

/**
 * Creates an empty scene (zero radiated field).
 *
 * # Safety
 * `k` and `center` must point to three readable doubles; `out` must be a
 * writable pointer.
 */
enum HpStatus hp_scene_new(const double *k,
                           const double *center,
                           double r_min,
                           struct HpScene **out);

/**
 * Adds `re + i·im` to the amplitude of mode `(l, m)`.
 *
 * # Safety
 * `scene` must be a live handle from [`hp_scene_new`].
 */
enum HpStatus hp_scene_add_mode(struct HpScene *scene, uint32_t l, int32_t m, double re, double im);

/**
 * Radiated field `ψ₁(x)`.
 *
 * # Safety
 * `scene` must be live; `x` must point to three doubles; `re`, `im` writable.
 */
enum HpStatus hp_scene_eval_radiated(const struct HpScene *scene,
                                     const double *x,
                                     double *re,
                                     double *im);

/**
 * Intensity `|e^{ik·x} + ψ₁(x)|²`.
 *
 * # Safety
 * `scene` must be live; `x` must point to three doubles; `out` writable.
 */
enum HpStatus hp_scene_intensity(const struct HpScene *scene, const double *x, double *out);

/**
 * # Safety
 * `scene` must be NULL or a handle from [`hp_scene_new`] not yet freed.
 */
void hp_scene_free(struct HpScene *scene);

/**
 * Offset τ maximizing `|D|` for direction `dir`.
 *
 * # Safety
 * `k`, `dir` must point to three doubles; `out` writable.
 */
enum HpStatus hp_choose_tau(const double *k, const double *dir, double *out);

/**
 * Recovers coefficients from the scene's synthetic intensities along the
 * ray `x0 + s·dir`.
 *
 * # Safety
 * `scene` must be live; `x0`, `dir` point to three doubles; `plan` valid
 * with `s_grid` readable for `s_len` doubles; `out` writable.
 */
enum HpStatus hp_recover_scene(const struct HpScene *scene,
                               const double *x0,
                               const double *dir,
                               const struct HpPlan *plan,
                               struct HpReport **out);

/**
 * Recovers coefficients from intensities supplied by `measure`.
 *
 * # Safety
 * `measure` must be callable with `ctx` for the duration of the call;
 * vector, plan and output pointers as in [`hp_recover_scene`].
 */
enum HpStatus hp_recover_callback(HpIntensityFn measure,
                                  void *ctx,
                                  const double *k,
                                  const double *x0,
                                  const double *dir,
                                  const struct HpPlan *plan,
                                  struct HpReport **out);

/**
 * Number of recovered coefficients (0 for NULL).
 *
 * # Safety
 * `report` must be NULL or live.
 */
size_t hp_report_len(const struct HpReport *report);

/**
 * Whether the amplification policy stopped recovery early.
 *
 * # Safety
 * `report` must be NULL or live.
 */
bool hp_report_truncated(const struct HpReport *report);

/**
 * Plane-wave-gauged coefficient `f_{index+1}''`.
 *
 * # Safety
 * `report` must be live; `re`, `im` writable.
 */
enum HpStatus hp_report_coefficient(const struct HpReport *report,
                                    size_t index,
                                    double *re,
                                    double *im);

/**
 * Reconstructed `ψ₁` at ray parameter `s` from the ray start.
 *
 * # Safety
 * `report` must be live; `re`, `im` writable.
 */
enum HpStatus hp_report_reconstruct(const struct HpReport *report,
                                    double s,
                                    double *re,
                                    double *im);

/**
 * # Safety
 * `report` must be NULL or a handle from a `hp_recover_*` call not yet freed.
 */
void hp_report_free(struct HpReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLOPHASE_H */
