#ifndef MEISSNER_LAB_H
#define MEISSNER_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlDilatationKind {
  // `h_j`, normal-mode dilatation.
  ML_DILATATION_KIND_NORMAL = 0,
  // `nu_j`, bare-oscillator dilatation.
  ML_DILATATION_KIND_BARE = 1,
} MlDilatationKind;

typedef enum MlLogBase {
  ML_LOG_BASE_NATURAL = 0,
  ML_LOG_BASE_TWO = 1,
} MlLogBase;

// Result of every fallible call.
typedef enum MlStatus {
  ML_STATUS_OK = 0,
  // Non-finite or negative input, or an out-of-range enum/mode.
  ML_STATUS_INVALID_ARGUMENT = 1,
  // Outside the open disc `eps^2 + j0^2 < omega0_sq^2`.
  ML_STATUS_UNBOUNDED = 2,
  // On the disc edge: a normal frequency vanishes.
  ML_STATUS_FORBIDDEN_POINT = 3,
  // Argument outside the mathematical domain (e.g. negative time).
  ML_STATUS_DOMAIN = 4,
  ML_STATUS_NON_CONVERGED = 5,
  ML_STATUS_NULL_POINTER = 6,
  // An internal panic was caught.
  ML_STATUS_PANIC = 7,
} MlStatus;

// Opaque handle to a precomputed parameter point.
typedef struct MlModel MlModel;

typedef struct MlStability {
  // Stability parameter; the point is stable iff `lambda < 1`.
  double lambda;
  // `max(1 - lambda, 0)`.
  double s;
  // Largest Floquet multiplier modulus per period.
  double growth_rate;
  bool stable;
} MlStability;

typedef struct MlObservables {
  double t;
  double h1;
  double h2;
  double nu1;
  double nu2;
  double n1;
  double n2;
  double m12;
  double mu;
  double lambda_min;
  double e_n;
} MlObservables;

typedef struct MlDilatation {
  double h;
  double h_dot;
} MlDilatation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a model for `(omega0_sq, epsilon, j0)` and stores it in `*out`.
//
// On failure `*out` is set to NULL.
//
// # Safety
// `out` must be NULL or valid for writing one pointer.
enum MlStatus ml_model_new(double omega0_sq, double epsilon, double j0, struct MlModel **out);

// Releases a model. NULL is ignored.
//
// # Safety
// `model` must be NULL or a pointer from `ml_model_new` not yet freed.
void ml_model_free(struct MlModel *model);

// # Safety
// `model` must be a live handle; `out` valid for one `MlStability`.
enum MlStatus ml_model_stability(const struct MlModel *model, struct MlStability *out);

// All observables at time `t >= 0`.
//
// # Safety
// `model` must be a live handle; `out` valid for one `MlObservables`.
enum MlStatus ml_model_observables(const struct MlModel *model,
                                   double t,
                                   enum MlLogBase base,
                                   struct MlObservables *out);

// Observables at `n` times; `out` receives `n` records.
//
// # Safety
// `model` must be a live handle; `times` readable and `out` writable for `n` elements.
enum MlStatus ml_model_observables_series(const struct MlModel *model,
                                          const double *times,
                                          uintptr_t n,
                                          enum MlLogBase base,
                                          struct MlObservables *out);

// Dilatation `h_j` (normal) or `nu_j` (bare) of mode `mode` (1 or 2) at `t`.
//
// # Safety
// `model` must be a live handle; `out` valid for one `MlDilatation`.
enum MlStatus ml_model_dilatation(const struct MlModel *model,
                                  enum MlDilatationKind kind,
                                  uint32_t mode,
                                  double t,
                                  struct MlDilatation *out);

// Message of the last failed call on this thread, or NULL if none.
// The pointer stays valid until the next failing call on the same thread.
const char *ml_last_error_message(void);

// Library version, a static NUL-terminated string.
const char *ml_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEISSNER_LAB_H */
