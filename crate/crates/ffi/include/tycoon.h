#ifndef TYCOON_H
#define TYCOON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every fallible call.
typedef enum TycoonStatus {
  TYCOON_STATUS_OK = 0,
  TYCOON_STATUS_NULL_POINTER = 1,
  TYCOON_STATUS_INVALID_ARGUMENT = 2,
  TYCOON_STATUS_SHAPE_MISMATCH = 3,
  TYCOON_STATUS_SOLVER_FAILURE = 4,
  TYCOON_STATUS_IO = 5,
  TYCOON_STATUS_FORMAT = 6,
  TYCOON_STATUS_PANIC = 7,
} TycoonStatus;

// Time-derivative discretization.
typedef enum TycoonDeriv {
  TYCOON_DERIV_SPECTRAL = 0,
  TYCOON_DERIV_FINITE_DIFFERENCE = 1,
} TycoonDeriv;

// Opaque solver parameters.
typedef struct TycoonParamsHandle TycoonParamsHandle;

// Opaque time-frequency representation, with the chirp track when it
// came from the solver.
typedef struct TycoonTfr TycoonTfr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread (empty after a
// success). Valid until the next call into this library on the thread.
const char *tycoon_last_error(void);

// Parameters with the library defaults. Free with [`tycoon_params_free`].
struct TycoonParamsHandle *tycoon_params_new(void);

// # Safety
// `p` must come from [`tycoon_params_new`] and not be used afterwards.
void tycoon_params_free(struct TycoonParamsHandle *p);

// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_lambda_tilde(struct TycoonParamsHandle *p, double value);

// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_gamma(struct TycoonParamsHandle *p, double value);

// Relative-change stopping thresholds for `F` and the chirp track.
//
// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_tolerances(struct TycoonParamsHandle *p,
                                               double eps1,
                                               double eps2);

// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_max_iters(struct TycoonParamsHandle *p,
                                              size_t max_inner,
                                              size_t max_outer);

// `count` log-spaced values from `start` to `end`, scaled by the signal
// energy.
//
// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_relative_schedule(struct TycoonParamsHandle *p,
                                                      double start,
                                                      double end,
                                                      size_t count);

// Absolute, strictly decreasing `mu_tilde` values.
//
// # Safety
// `p` must be a live params handle; `values` must point to `len` doubles.
enum TycoonStatus tycoon_params_set_explicit_schedule(struct TycoonParamsHandle *p,
                                                      const double *values,
                                                      size_t len);

// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_deriv(struct TycoonParamsHandle *p, enum TycoonDeriv method);

// Known noise standard deviation for stage selection; a negative value
// clears it.
//
// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_noise_std(struct TycoonParamsHandle *p, double value);

// # Safety
// `p` must be a live params handle.
enum TycoonStatus tycoon_params_set_seed(struct TycoonParamsHandle *p, uint64_t seed);

// Run the solver on `len` samples spaced `dt` apart. A null `params`
// uses the defaults. On success `*out` owns a new representation.
//
// # Safety
// `signal` must point to `len` doubles; `params` must be null or live;
// `out` must be writable.
enum TycoonStatus tycoon_solve(const double *signal,
                               size_t len,
                               double dt,
                               const struct TycoonParamsHandle *params,
                               struct TycoonTfr **out);

// Gaussian-window STFT with standard deviation `sigma` seconds.
//
// # Safety
// `signal` must point to `len` doubles; `out` must be writable.
enum TycoonStatus tycoon_stft(const double *signal,
                              size_t len,
                              double dt,
                              double sigma,
                              struct TycoonTfr **out);

// Synchrosqueezed Gaussian STFT with the default relative threshold.
//
// # Safety
// `signal` must point to `len` doubles; `out` must be writable.
enum TycoonStatus tycoon_sst(const double *signal,
                             size_t len,
                             double dt,
                             double sigma,
                             struct TycoonTfr **out);

// # Safety
// `t` must be null or a live representation.
size_t tycoon_tfr_rows(const struct TycoonTfr *t);

// # Safety
// `t` must be null or a live representation.
size_t tycoon_tfr_cols(const struct TycoonTfr *t);

// # Safety
// `t` must be null or a live representation.
double tycoon_tfr_dt(const struct TycoonTfr *t);

// # Safety
// `t` must be null or a live representation.
double tycoon_tfr_dw(const struct TycoonTfr *t);

// Selected `mu_tilde` for solver output, NaN for baselines.
//
// # Safety
// `t` must be null or a live representation.
double tycoon_tfr_chosen_mu_tilde(const struct TycoonTfr *t);

// Copy the values into `re` and `im`, each of length `rows * cols`.
//
// # Safety
// `t` must be live; `re` and `im` must each hold `len` doubles.
enum TycoonStatus tycoon_tfr_copy_values(const struct TycoonTfr *t,
                                         double *re,
                                         double *im,
                                         size_t len);

// Length of the chirp track, 0 for baseline output.
//
// # Safety
// `t` must be null or a live representation.
size_t tycoon_tfr_alpha_len(const struct TycoonTfr *t);

// # Safety
// `t` must be live; `out` must hold `len` doubles.
enum TycoonStatus tycoon_tfr_copy_alpha(const struct TycoonTfr *t, double *out, size_t len);

// Write the representation in the binary TFR format.
//
// # Safety
// `t` must be live; `path` must be a NUL-terminated string.
enum TycoonStatus tycoon_tfr_write(const struct TycoonTfr *t, const char *path);

// Read a binary TFR file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum TycoonStatus tycoon_tfr_read(const char *path, struct TycoonTfr **out);

// # Safety
// `t` must come from this library and not be used afterwards.
void tycoon_tfr_free(struct TycoonTfr *t);

// 1-D optimal-transport distance between two histograms summing to 1.
//
// # Safety
// `p` and `q` must each point to `len` doubles; `out` must be writable.
enum TycoonStatus tycoon_ot1d(const double *p,
                              const double *q,
                              size_t len,
                              double bin_width,
                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TYCOON_H */
