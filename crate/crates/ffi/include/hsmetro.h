/* SPDX-License-Identifier: Apache-2.0 */

#ifndef HSMETRO_H
#define HSMETRO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HmStatus {
  HM_STATUS_OK = 0,
  HM_STATUS_NULL_POINTER = 1,
  HM_STATUS_INVALID_ARGUMENT = 2,
  HM_STATUS_PARSE = 3,
  HM_STATUS_NOT_UNITARY = 4,
  HM_STATUS_DIMENSION = 5,
  HM_STATUS_DOMAIN = 6,
  HM_STATUS_UNDEFINED_PHASE = 7,
  HM_STATUS_INTERNAL = 8,
} HmStatus;

// Values accepted for the `side` argument of [`hm_plan_build`].
typedef enum HmSide {
  HM_SIDE_ADAPT_OUTPUT = 0,
  HM_SIDE_ADAPT_INPUT = 1,
} HmSide;

// Parsed network description.
typedef struct HmNetwork HmNetwork;

// Adapted stages and local-oscillator phase.
typedef struct HmPlan HmPlan;

// Validated unitary matrix.
typedef struct HmUnitary HmUnitary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message (NUL-terminated) into
// `buf` and returns the buffer size it needs, including the terminator.
// Returns 0 when no error is recorded. Passing a null `buf` only queries the
// size.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t hm_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *hm_version(void);

// Parses network-description text.
//
// # Safety
// `source` must be a valid NUL-terminated string; `out` must be writable.
enum HmStatus hm_network_parse(const char *source, struct HmNetwork **out);

// # Safety
// `net` must be null or a handle from [`hm_network_parse`] not yet freed.
void hm_network_free(struct HmNetwork *net);

// # Safety
// `net` must be a live handle; `modes` must be writable.
enum HmStatus hm_network_modes(const struct HmNetwork *net, size_t *modes);

// `U(phi)` of the network.
//
// # Safety
// `net` must be a live handle; `out` must be writable.
enum HmStatus hm_network_evaluate(const struct HmNetwork *net, double phi, struct HmUnitary **out);

// Balanced `dim`-mode Fourier interferometer.
//
// # Safety
// `out` must be writable.
enum HmStatus hm_unitary_dft(size_t dim, struct HmUnitary **out);

// Builds a unitary from row-major real and imaginary parts; fails with
// [`HmStatus::NotUnitary`] when `U†U` deviates from the identity.
//
// # Safety
// `re` and `im` must each point to `dim * dim` readable doubles.
enum HmStatus hm_unitary_from_entries(size_t dim,
                                      const double *re,
                                      const double *im,
                                      struct HmUnitary **out);

// # Safety
// `u` must be null or a live unitary handle.
void hm_unitary_free(struct HmUnitary *u);

// # Safety
// `u` must be a live handle; `dim` must be writable.
enum HmStatus hm_unitary_dim(const struct HmUnitary *u, size_t *dim);

// Entry at 0-based `(row, col)`.
//
// # Safety
// `u` must be a live handle; `re` and `im` must be writable.
enum HmStatus hm_unitary_entry(const struct HmUnitary *u,
                               size_t row,
                               size_t col,
                               double *re,
                               double *im);

// `P` and `gamma` of `(V_out U V_in)_11`.
//
// # Safety
// All handles must be live; `p` and `gamma` must be writable.
enum HmStatus hm_reduced_model(const struct HmUnitary *v_in,
                               const struct HmUnitary *u,
                               const struct HmUnitary *v_out,
                               double *p,
                               double *gamma);

// Closed-form homodyne variance of the measured mode.
double hm_quadrature_variance(double p, double gamma, double r, double theta);

// Homodyne variance from full covariance propagation.
//
// # Safety
// All handles must be live; `out` must be writable.
enum HmStatus hm_oracle_variance(const struct HmUnitary *v_in,
                                 const struct HmUnitary *u,
                                 const struct HmUnitary *v_out,
                                 double r,
                                 double theta,
                                 double *out);

// # Safety
// `out` must be writable.
enum HmStatus hm_rho_prefactor(double k, double ell, double *out);

// `8 rho(k, ell) (d gamma)² N²`.
//
// # Safety
// `out` must be writable.
enum HmStatus hm_asymptotic_fisher(double k, double ell, double dgamma, double n, double *out);

// # Safety
// `out` must be writable.
enum HmStatus hm_cramer_rao(double total_fisher, double *out);

// Adapts one stage at `phi_cl`; `fixed` is the stage left untouched and
// `side` is one of the [`HmSide`] values.
//
// # Safety
// `net` and `fixed` must be live handles; `out` must be writable.
enum HmStatus hm_plan_build(const struct HmNetwork *net,
                            const struct HmUnitary *fixed,
                            double phi_cl,
                            double k,
                            double photons,
                            int32_t side,
                            struct HmPlan **out);

// # Safety
// `plan` must be null or a live plan handle.
void hm_plan_free(struct HmPlan *plan);

// Local-oscillator phase chosen at build time.
//
// # Safety
// `plan` must be a live handle; `theta` must be writable.
enum HmStatus hm_plan_theta(const struct HmPlan *plan, double *theta);

// New handles holding copies of the plan's input and output stages.
//
// # Safety
// `plan` must be a live handle; `v_in` and `v_out` must be writable.
enum HmStatus hm_plan_stages(const struct HmPlan *plan,
                             struct HmUnitary **v_in,
                             struct HmUnitary **v_out);

// Per-outcome Fisher information at `phi` with the local oscillator
// locked to the minimum-variance quadrature plus `k/N`.
//
// # Safety
// `plan` and `net` must be live handles; `out` must be writable.
enum HmStatus hm_plan_exact_fisher(const struct HmPlan *plan,
                                   const struct HmNetwork *net,
                                   double phi,
                                   double *out);

// Writes `count` homodyne outcomes for the reduced state `(p, gamma, r)`
// into `out`; the stream is fixed by `seed`.
//
// # Safety
// `out` must point to `count` writable doubles.
enum HmStatus hm_sample_homodyne(double p,
                                 double gamma,
                                 double r,
                                 double theta,
                                 size_t count,
                                 uint64_t seed,
                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSMETRO_H */
