#ifndef ORBM_H
#define ORBM_H

#include <stdint.h>
#include <stddef.h>
#include <stdbool.h>

typedef enum OrbmFieldKind {
  ORBM_FIELD_KIND_ANGLE = 0,
  ORBM_FIELD_KIND_DENSITY = 1,
  ORBM_FIELD_KIND_GENERIC = 2,
} OrbmFieldKind;

/*
 Result of every fallible call.
 */
typedef enum OrbmStatus {
  ORBM_STATUS_OK = 0,
  ORBM_STATUS_NULL_POINTER = 1,
  ORBM_STATUS_INVALID_ARGUMENT = 2,
  /*
   The input lies outside the class the operation needs.
   */
  ORBM_STATUS_NOT_IN_CLASS = 3,
  ORBM_STATUS_INCONCLUSIVE = 4,
  ORBM_STATUS_INTERNAL_CONSISTENCY = 5,
  ORBM_STATUS_SIMULATION = 6,
  ORBM_STATUS_BUFFER_TOO_SMALL = 7,
  ORBM_STATUS_PANIC = 8,
  ORBM_STATUS_OTHER = 9,
} OrbmStatus;

typedef enum OrbmVerdict {
  ORBM_VERDICT_FINITE = 0,
  ORBM_VERDICT_DIVERGENT = 1,
  ORBM_VERDICT_INCONCLUSIVE = 2,
} OrbmVerdict;

/*
 Sampled boundary function.
 */
typedef struct OrbmField OrbmField;

/*
 Density and rotation number.
 */
typedef struct OrbmPair OrbmPair;

/*
 Simulated path.
 */
typedef struct OrbmPath OrbmPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *orbm_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *orbm_version(void);

/*
 Builds a field from `n` samples at angles `2 pi j / n`.

 # Safety
 `values` must point to `n` readable doubles; `out` must be writable.
 */
enum OrbmStatus orbm_field_new(enum OrbmFieldKind kind,
                               const double *values,
                               uintptr_t n,
                               struct OrbmField **out);

/*
 # Safety
 `field` must be NULL or a handle from this library not yet freed.
 */
void orbm_field_free(struct OrbmField *field);

/*
 # Safety
 `field` must be a live handle or NULL.
 */
uintptr_t orbm_field_len(const struct OrbmField *field);

/*
 Copies the samples into `out`, which holds `cap` doubles.

 # Safety
 `field` must be a live handle; `out` must point to `cap` writable doubles.
 */
enum OrbmStatus orbm_field_values(const struct OrbmField *field, double *out, uintptr_t cap);

/*
 Density pair of an angle field.

 # Safety
 `theta` must be a live handle; `out` must be writable.
 */
enum OrbmStatus orbm_theta_to_hmu(const struct OrbmField *theta, struct OrbmPair **out);

/*
 Boundary angle field of a pair on `n_grid` samples.

 # Safety
 `pair` must be a live handle; `out` must be writable.
 */
enum OrbmStatus orbm_hmu_to_theta(const struct OrbmPair *pair,
                                  uintptr_t n_grid,
                                  struct OrbmField **out);

/*
 # Safety
 `pair` must be NULL or a handle from this library not yet freed.
 */
void orbm_pair_free(struct OrbmPair *pair);

/*
 # Safety
 `pair` must be a live handle or NULL.
 */
double orbm_pair_mu0(const struct OrbmPair *pair);

/*
 Density, its conjugate, the angle and the rotation field at `x + i y`.
 Any output pointer may be NULL.

 # Safety
 `pair` must be a live handle; non-NULL outputs must be writable.
 */
enum OrbmStatus orbm_pair_eval(const struct OrbmPair *pair,
                               double x,
                               double y,
                               double *h,
                               double *h_conj,
                               double *theta,
                               double *mu);

/*
 Radial hitting classification at boundary angle `angle`. `value` receives
 the finite estimate or the divergence rate.

 # Safety
 `pair` must be a live handle; `verdict` and `value` must be writable.
 */
enum OrbmStatus orbm_hitting_test(const struct OrbmPair *pair,
                                  double angle,
                                  double r_min,
                                  enum OrbmVerdict *verdict,
                                  double *value);

/*
 Simulates the reflected process from `x0_re + i x0_im` up to `horizon`.

 # Safety
 `theta` must be a live angle-field handle; `out` must be writable.
 */
enum OrbmStatus orbm_simulate(const struct OrbmField *theta,
                              double x0_re,
                              double x0_im,
                              double dt,
                              double horizon,
                              uint64_t seed,
                              struct OrbmPath **out);

/*
 # Safety
 `path` must be NULL or a handle from this library not yet freed.
 */
void orbm_path_free(struct OrbmPath *path);

/*
 Number of samples, including the start.

 # Safety
 `path` must be a live handle or NULL.
 */
uintptr_t orbm_path_len(const struct OrbmPath *path);

/*
 Copies interleaved `(x, y)` positions into `xy` (room for `cap` doubles)
 and, when `local_time` is not NULL, the local time into it (room for
 `cap / 2` doubles).

 # Safety
 `path` must be a live handle; the buffers must have the stated sizes.
 */
enum OrbmStatus orbm_path_samples(const struct OrbmPath *path,
                                  double *xy,
                                  double *local_time,
                                  uintptr_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBM_H */
