/*
 * prodspec - C API for the product-ensemble spectral sampling library.
 *
 * All functionality is exposed through opaque handles and status codes so
 * the shared library can be driven from C, FFI bindings, or the bundled
 * CLI. Every function returns ps_status; outputs go through pointers.
 * ps_last_error() returns a thread-local message for the last failing call
 * on the current thread.
 *
 * Handles are created by ps_*_create-style constructors and released with
 * the matching ps_*_free. All query functions are pure and safe to call
 * concurrently on distinct handles (or shared read-only handles); sampling
 * takes an explicit (seed, stream_id) pair, so concurrent replicates use
 * distinct stream ids.
 */

#ifndef PRODSPEC_H
#define PRODSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PRODSPEC_BUILD)
#define PRODSPEC_API __declspec(dllexport)
#else
#define PRODSPEC_API __declspec(dllimport)
#endif
#else
#define PRODSPEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
    PS_OK = 0,
    PS_ERR_PARAM = 1,    /* invalid argument / parameter domain */
    PS_ERR_CONTRACT = 2, /* operation misuse (state precondition violated) */
    PS_ERR_NUMERIC = 3,  /* quadrature / eigensolver failure */
    PS_ERR_GUARD = 4     /* matrix-route size guard refused the request */
} ps_status;

typedef enum ps_scaling {
    PS_SCALE_GINIBRE_POWER = 0, /* h(r) = r^(2/m) / n          */
    PS_SCALE_TRUNCATED_POWER = 1, /* h(r) = (r^2/b_n)^(1/gamma) */
    PS_SCALE_LINEAR = 2         /* h(r) = r / a_n               */
} ps_scaling;

typedef enum ps_regime {
    PS_REGIME_GINIBRE_POWER = 0,
    PS_REGIME_ARC_LAW = 1,
    PS_REGIME_GENERAL_F = 2,
    PS_REGIME_CIRCULAR_LAW = 3
} ps_regime;

typedef struct ps_ensemble ps_ensemble;
typedef struct ps_sample ps_sample;
typedef struct ps_profile ps_profile;
typedef struct ps_kernel ps_kernel;

PRODSPEC_API const char* ps_version(void);
PRODSPEC_API const char* ps_last_error(void);

/* ---- ensembles ------------------------------------------------------- */

PRODSPEC_API ps_status ps_ensemble_ginibre(uint32_t n, uint32_t m,
                                           ps_ensemble** out);
/* gaps has length m; factor r is the n x n corner of an
 * (n + gaps[r]) x (n + gaps[r]) Haar unitary. */
PRODSPEC_API ps_status ps_ensemble_truncated(uint32_t n, uint32_t m,
                                             const uint32_t* gaps,
                                             ps_ensemble** out);
PRODSPEC_API void ps_ensemble_free(ps_ensemble* e);

PRODSPEC_API ps_status ps_ensemble_n(const ps_ensemble* e, uint32_t* out);
PRODSPEC_API ps_status ps_ensemble_m(const ps_ensemble* e, uint32_t* out);
/* log b_n = sum_r log(n/(n+l_r)); truncated ensembles only. */
PRODSPEC_API ps_status ps_ensemble_log_bn(const ps_ensemble* e, double* out);
/* log a_n of the linear scaling (sqrt(b_n), or n^(m/2) for Ginibre). */
PRODSPEC_API ps_status ps_ensemble_log_an(const ps_ensemble* e, double* out);

/* E |Z_J|^(2t), J uniform on 1..n; requires t > -1. */
PRODSPEC_API ps_status ps_ensemble_exact_moment(const ps_ensemble* e,
                                                double t, double* out);
/* E log |Z_j|^2 for 1 <= j <= n. */
PRODSPEC_API ps_status ps_ensemble_exact_log_mean(const ps_ensemble* e,
                                                  uint32_t j, double* out);

/* ---- sampling (structural route) -------------------------------------- */

PRODSPEC_API ps_status ps_sample_radii(const ps_ensemble* e, uint64_t seed,
                                       uint64_t stream_id, ps_sample** out);
PRODSPEC_API void ps_sample_free(ps_sample* s);

PRODSPEC_API ps_status ps_sample_size(const ps_sample* s, uint32_t* out);
/* Fills n entries of log |Z_j|^2 in index order j = 1..n. */
PRODSPEC_API ps_status ps_sample_log_sq_moduli(const ps_sample* s,
                                               double* out);
/* Attaches i.i.d. Uniform[0, 2*pi) angles; PS_ERR_CONTRACT if already
 * attached. The angles reproduce the one-eigenvalue marginal and the
 * limiting empirical measures, not the joint angular law. */
PRODSPEC_API ps_status ps_sample_attach_angles(ps_sample* s, uint64_t seed,
                                               uint64_t stream_id);
PRODSPEC_API ps_status ps_sample_angles(const ps_sample* s, double* out);
/* Scaled radii h(|Z_j|) in index order; gamma_n is only read for
 * PS_SCALE_TRUNCATED_POWER and must then be >= 1. */
PRODSPEC_API ps_status ps_sample_scaled(const ps_sample* s, ps_scaling kind,
                                        double gamma_n, double* out);

/* ---- matrix route (ground truth at small n) --------------------------- */

/* Samples the factor matrices, multiplies them, and solves for the
 * eigenvalues. Arrays re, im, log_sq, arg each have length n (any may be
 * NULL). Returns PS_ERR_GUARD when n > 64. */
PRODSPEC_API ps_status ps_oracle_spectrum(const ps_ensemble* e, uint64_t seed,
                                          uint64_t stream_id, double* re,
                                          double* im, double* log_sq,
                                          double* arg, double* residual);

/* ---- limiting profiles ------------------------------------------------ */

PRODSPEC_API ps_status ps_profile_ginibre(uint32_t m, ps_profile** out);
PRODSPEC_API ps_status ps_profile_cor1(uint32_t m, const double* alphas,
                                       ps_profile** out);
/* q(t) constant. */
PRODSPEC_API ps_status ps_profile_cor2_const(double q, ps_profile** out);
/* q(t) = slope * t. */
PRODSPEC_API ps_status ps_profile_cor2_linear(double slope, ps_profile** out);
/* q tabulated on a grid, linearly interpolated. */
PRODSPEC_API ps_status ps_profile_cor2_tabulated(const double* t,
                                                 const double* q, size_t len,
                                                 ps_profile** out);
/* beta >= 0; pass INFINITY for the sum-of-gaps normalization. */
PRODSPEC_API ps_status ps_profile_cor3(double beta, ps_profile** out);
PRODSPEC_API ps_status ps_profile_cor4(ps_profile** out);
PRODSPEC_API void ps_profile_free(ps_profile* p);

PRODSPEC_API ps_status ps_profile_regime(const ps_profile* p, ps_regime* out);
/* The next four return PS_ERR_CONTRACT when the component is absent in the
 * profile's regime (e.g. densities of an arc-law profile). */
PRODSPEC_API ps_status ps_profile_F(const ps_profile* p, double x,
                                    double* out);
PRODSPEC_API ps_status ps_profile_F_inverse(const ps_profile* p, double y,
                                            double* out);
PRODSPEC_API ps_status ps_profile_radial_density(const ps_profile* p,
                                                 double x, double* out);
PRODSPEC_API ps_status ps_profile_planar_density(const ps_profile* p,
                                                 double rho, double* out);
/* Limiting CDF of the scaled radial coordinate; defined for every y >= 0. */
PRODSPEC_API ps_status ps_profile_radial_cdf(const ps_profile* p, double y,
                                             double* out);

/* Finite-n scaling function F_n(x) of a truncated ensemble. */
PRODSPEC_API ps_status ps_fn_finite(const ps_ensemble* e, double gamma_n,
                                    double x, double* out);

/* ---- determinantal kernel --------------------------------------------- */

PRODSPEC_API ps_status ps_kernel_ginibre_m1(uint32_t n, ps_kernel** out);
PRODSPEC_API ps_status ps_kernel_truncated_m1(uint32_t n, uint32_t l,
                                              ps_kernel** out);
/* Piecewise-linear weight phi on a strictly increasing grid. */
PRODSPEC_API ps_status ps_kernel_tabulated(uint32_t n, const double* x,
                                           const double* phi, size_t len,
                                           ps_kernel** out);
PRODSPEC_API void ps_kernel_free(ps_kernel* k);

PRODSPEC_API ps_status ps_kernel_log_ck(const ps_kernel* k, uint32_t idx,
                                        double* out);
PRODSPEC_API ps_status ps_kernel_log_norm_const(const ps_kernel* k,
                                                double* out);
PRODSPEC_API ps_status ps_kernel_eval(const ps_kernel* k, double z_re,
                                      double z_im, double w_re, double w_im,
                                      double* out_re, double* out_im);
/* Radial mixture density P_n(r). */
PRODSPEC_API ps_status ps_kernel_radial_density(const ps_kernel* k, double r,
                                                double* out);
/* Density of one eigenvalue at z = z_re + i z_im. */
PRODSPEC_API ps_status ps_kernel_one_point_density(const ps_kernel* k,
                                                   double z_re, double z_im,
                                                   double* out);

/* ---- statistics -------------------------------------------------------- */

PRODSPEC_API ps_status ps_ks_two_sample(const double* a, size_t na,
                                        const double* b, size_t nb,
                                        double* out);
/* One-sample KS against the uniform CDF on [lo, hi]. */
PRODSPEC_API ps_status ps_ks_uniform(const double* v, size_t n, double lo,
                                     double hi, double* out);
/* One-sample KS against a profile's limiting radial CDF. */
PRODSPEC_API ps_status ps_ks_vs_profile_radial(const ps_profile* p,
                                               const double* v, size_t n,
                                               double* out);
PRODSPEC_API ps_status ps_digamma(double x, double* out);
/* Centered fourth moment of half-plane counts over n^2, matrix route;
 * reps >= 100, n within the guard. */
PRODSPEC_API ps_status ps_fourth_moment_ratio(const ps_ensemble* e,
                                              double halfplane_angle,
                                              uint32_t reps, uint64_t seed,
                                              uint64_t stream_id,
                                              double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PRODSPEC_H */
