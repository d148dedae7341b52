#ifndef PARAFRAC_H
#define PARAFRAC_H

/* Generated by cbindgen from the parafrac-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum ParafracStatus {
  PARAFRAC_STATUS_OK = 0,
  PARAFRAC_STATUS_NULL_POINTER = 1,
  PARAFRAC_STATUS_INVALID_PARAMETER = 2,
  PARAFRAC_STATUS_INSUFFICIENT_DATA = 3,
  PARAFRAC_STATUS_INCONCLUSIVE = 4,
  PARAFRAC_STATUS_RUNTIME_ERROR = 5,
} ParafracStatus;

// Per-scale occupancy counts (opaque).
typedef struct ParafracLedger ParafracLedger;

// A simulated path (opaque).
typedef struct ParafracPath ParafracPath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Simulate an isotropic stable path on a uniform grid of `n_points`
// covering `[0, t_max]` and return an owned handle in `out`.
//
// # Safety
// `out` must be a valid pointer. The handle must be released with
// [`parafrac_path_free`].
enum ParafracStatus parafrac_path_simulate(double alpha,
                                           uintptr_t dim,
                                           uintptr_t n_points,
                                           double t_max,
                                           uint64_t seed,
                                           struct ParafracPath **out);

// Number of grid points in a path handle; 0 for a null handle.
//
// # Safety
// `path` must be null or a live handle from [`parafrac_path_simulate`].
uintptr_t parafrac_path_len(const struct ParafracPath *path);

// Spatial dimension of a path handle; 0 for a null handle.
//
// # Safety
// `path` must be null or a live handle.
uintptr_t parafrac_path_dim(const struct ParafracPath *path);

// Copy the i-th sample: time into `time_out`, `dim` coordinates into
// `coords_out`.
//
// # Safety
// `path` must be a live handle; `time_out` must hold one double and
// `coords_out` at least `parafrac_path_dim(path)` doubles.
enum ParafracStatus parafrac_path_point(const struct ParafracPath *path,
                                        uintptr_t index,
                                        double *time_out,
                                        double *coords_out);

// Release a path handle (null is a no-op).
//
// # Safety
// `path` must be null or an unreleased handle from this library.
void parafrac_path_free(struct ParafracPath *path);

// Count occupied cylinders of the path's graph under `gauge_alpha` for
// levels `k_min..=k_max` and return a ledger handle.
//
// # Safety
// `path` must be a live handle and `out` a valid pointer; release the
// ledger with [`parafrac_ledger_free`].
enum ParafracStatus parafrac_graph_occupancy(const struct ParafracPath *path,
                                             double gauge_alpha,
                                             uint32_t k_min,
                                             uint32_t k_max,
                                             struct ParafracLedger **out);

// Same as [`parafrac_graph_occupancy`] for the range (time axis
// dropped; the gauge should be 1 for a Euclidean count).
//
// # Safety
// As for [`parafrac_graph_occupancy`].
enum ParafracStatus parafrac_range_occupancy(const struct ParafracPath *path,
                                             double gauge_alpha,
                                             uint32_t k_min,
                                             uint32_t k_max,
                                             struct ParafracLedger **out);

// Number of levels in a ledger handle; 0 for null.
//
// # Safety
// `ledger` must be null or a live handle.
uintptr_t parafrac_ledger_len(const struct ParafracLedger *ledger);

// Copy the i-th ledger row into `k_out` and `count_out`.
//
// # Safety
// `ledger` must be a live handle; the out-pointers must be valid.
enum ParafracStatus parafrac_ledger_row(const struct ParafracLedger *ledger,
                                        uintptr_t index,
                                        uint32_t *k_out,
                                        uint64_t *count_out);

// Least-squares dimension estimate of a ledger.
//
// # Safety
// `ledger` must be a live handle; the out-pointers must be valid.
enum ParafracStatus parafrac_ledger_estimate(const struct ParafracLedger *ledger,
                                             double *value_out,
                                             double *stderr_out);

// Release a ledger handle (null is a no-op).
//
// # Safety
// `ledger` must be null or an unreleased handle from this library.
void parafrac_ledger_free(struct ParafracLedger *ledger);

// Parabolic graph dimension of a constant drift: `(alpha v 1) dim_T`.
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_constant_drift_phi(double alpha, double dim_t, double *out);

// Parabolic dimension of the process graph: `(alpha v 1) dim_T`.
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_process_graph_phi(double alpha, double dim_t, double *out);

// Range dimension of the driftless process: `min(alpha dim_T, d)`.
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_process_range_dim(double alpha,
                                               uintptr_t d,
                                               double dim_t,
                                               double *out);

// Graph dimension with drift from `phi_alpha` (pass phi_1 for
// `alpha <= 1`).
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_graph_dim_with_drift(double alpha,
                                                  uintptr_t d,
                                                  double phi_alpha,
                                                  double *out);

// Range dimension with drift from `phi_alpha`.
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_range_dim_with_drift(double alpha,
                                                  uintptr_t d,
                                                  double phi_alpha,
                                                  double *out);

// A priori interval for the Euclidean dimension from `phi_alpha`.
//
// # Safety
// `lo_out` and `hi_out` must be valid pointers.
enum ParafracStatus parafrac_apriori_dim_bounds(double alpha,
                                                uintptr_t d,
                                                double phi_alpha,
                                                double *lo_out,
                                                double *hi_out);

// Hoelder upper bound on the parabolic graph dimension of a drift.
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_holder_phi_upper(double alpha,
                                              uintptr_t d,
                                              double dim_t,
                                              double holder_beta,
                                              double *out);

// Parabolic graph dimension of fractional Brownian motion: `dim_T / H`.
//
// # Safety
// `out` must be a valid pointer.
enum ParafracStatus parafrac_fbm_graph_phi(double hurst, double dim_t, double *out);

// Monte Carlo estimate of the graph difference kernel
// `E ||(tau, sign(tau) X_|tau| + delta)||^-beta`.
//
// # Safety
// `delta` must point to `d` doubles; the out-pointers must be valid.
enum ParafracStatus parafrac_kernel_k(double alpha,
                                      uintptr_t d,
                                      double beta,
                                      double tau,
                                      const double *delta,
                                      uintptr_t n_mc,
                                      uint64_t seed,
                                      double *mean_out,
                                      double *stderr_out,
                                      double *clip_rate_out);

// Monte Carlo estimate of the range difference kernel
// `E ||sign(tau) X_|tau| + delta||^-beta` (requires `beta < d`).
//
// # Safety
// As for [`parafrac_kernel_k`].
enum ParafracStatus parafrac_kernel_kappa(double alpha,
                                          uintptr_t d,
                                          double beta,
                                          double tau,
                                          const double *delta,
                                          uintptr_t n_mc,
                                          uint64_t seed,
                                          double *mean_out,
                                          double *stderr_out,
                                          double *clip_rate_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARAFRAC_H */
