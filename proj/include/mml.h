/* C interface to the matrix-model laboratory.
 *
 * Conventions:
 *   - Every object is an opaque handle created by a mml_*_create/solve/build
 *     call and released by the matching mml_*_free (NULL-safe).
 *   - Functions returning mml_status report failure through the code and
 *     leave a human-readable message in mml_last_error() (thread-local).
 *   - Plain-double evaluators return NaN on failure (and set the message).
 *   - Strings returned through char** are heap-allocated; release them with
 *     mml_free_string.
 */
#ifndef MML_H
#define MML_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mml_status {
  MML_OK = 0,
  MML_INVALID_ARGUMENT = 1,
  MML_UNSUPPORTED_DERIVATIVE = 2,
  MML_MULTI_CUT_UNSUPPORTED = 3,
  MML_RESOLUTION = 4,
  MML_IO = 5,
  MML_INTERNAL = 6
} mml_status;

const char* mml_version(void);
/* Message for the most recent failure on this thread ("" if none). */
const char* mml_last_error(void);
void mml_free_string(char* s);
/* Caps worker parallelism for grid sweeps; 0 restores the hardware default. */
void mml_set_threads(int k);

/* ---- confining potential ------------------------------------------------ */

typedef struct mml_potential mml_potential;

mml_status mml_potential_create_gaussian(mml_potential** out);
mml_status mml_potential_create_quartic(double g, double t, mml_potential** out);
/* Accepts the JSON form documented in docs/formats.md. */
mml_status mml_potential_create_from_json(const char* json_text, mml_potential** out);
mml_status mml_potential_to_json(const mml_potential* p, char** out);
/* Runs the confinement/regularity audit; *all_pass is 1 iff every check holds.
 * Pass NULL for report_out to skip the JSON report. */
mml_status mml_potential_validate(const mml_potential* p, int* all_pass, char** report_out);
/* V(lambda) and derivatives (order 0..3). */
double mml_potential_eval(const mml_potential* p, double lambda, int order);
void mml_potential_free(mml_potential* p);

/* ---- equilibrium measure ------------------------------------------------ */

typedef struct mml_equilibrium mml_equilibrium;

/* grid_order 0 selects the default spectral resolution. */
mml_status mml_equilibrium_solve(const mml_potential* p, size_t grid_order,
                                 mml_equilibrium** out);
double mml_equilibrium_a(const mml_equilibrium* m);
double mml_equilibrium_b(const mml_equilibrium* m);
double mml_equilibrium_u_star(const mml_equilibrium* m);
double mml_equilibrium_density(const mml_equilibrium* m, double lambda);
double mml_equilibrium_cdf(const mml_equilibrium* m, double lambda);
/* -integral of log|lambda - mu| dN(mu). */
double mml_equilibrium_log_potential(const mml_equilibrium* m, double lambda);
/* V + 2 * log_potential; equals u_star on the support. */
double mml_effective_potential(const mml_potential* p, const mml_equilibrium* m, double lambda);
/* Energy functional value at the equilibrium measure. */
double mml_equilibrium_energy(const mml_potential* p, const mml_equilibrium* m);
mml_status mml_equilibrium_to_json(const mml_equilibrium* m, char** out);
void mml_equilibrium_free(mml_equilibrium* m);

/* ---- orthonormal-polynomial recurrence ---------------------------------- */

typedef struct mml_recurrence mml_recurrence;

mml_status mml_recurrence_build(const mml_potential* p, size_t n, mml_recurrence** out);
size_t mml_recurrence_n(const mml_recurrence* t);
/* Copies the coefficients: off_diag and diag need n slots, log_gamma n+1.
 * Any argument may be NULL to skip that column. */
mml_status mml_recurrence_copy(const mml_recurrence* t, double* off_diag, double* diag,
                               double* log_gamma);
/* -(2 n^2)^{-1} * 2 log Q_n at beta = 2, from the recurrence norms. */
double mml_free_energy(const mml_recurrence* t);
mml_status mml_recurrence_to_json(const mml_recurrence* t, char** out);
void mml_recurrence_free(mml_recurrence* t);

/* ---- reproducing kernel -------------------------------------------------- */

typedef struct mml_kernel mml_kernel;

mml_status mml_kernel_create(const mml_potential* p, size_t n, mml_kernel** out);
size_t mml_kernel_n(const mml_kernel* f);
double mml_kernel_eval(const mml_kernel* f, double lambda, double mu);
/* One-point eigenvalue density K_n(lambda, lambda)/n. */
double mml_kernel_density(const mml_kernel* f, double lambda);
/* n^{-1} K_n(lambda0 + x/n, lambda0 + y/n). */
double mml_kernel_rescaled(const mml_kernel* f, double lambda0, double x, double y);
/* l-point correlation density at points[0..l-1], l in 1..n. */
mml_status mml_kernel_marginal(const mml_kernel* f, const double* points, size_t l,
                               double* out);
/* Interval where the finite-n density is safely in the bulk. */
mml_status mml_kernel_bulk_window(const mml_kernel* f, double* lo, double* hi);
/* Christoffel-Darboux identity residuals, JSON report. */
mml_status mml_kernel_identities_json(const mml_kernel* f, char** out);
void mml_kernel_free(mml_kernel* f);

/* ---- gap (hole) probabilities ------------------------------------------- */

/* det(I - S) for the sine kernel on [0, s]; error_estimate (optional) is the
 * order-halving stability estimate. */
mml_status mml_gap_sine(double s, size_t order, double* value, double* error_estimate);
/* Probability that [lambda0, lambda0 + s/(n rho_n(lambda0))] holds no
 * eigenvalue, as a Fredholm determinant of the rescaled kernel. */
mml_status mml_gap_hole(const mml_kernel* f, double lambda0, double s, size_t order,
                        double* value, double* error_estimate);

/* ---- log-gas Metropolis sampler ----------------------------------------- */

typedef struct mml_sample mml_sample;

/* burn_in 0 and thin 0 select the defaults (1e5*n moves, n moves). */
mml_status mml_sample_run(const mml_potential* p, size_t n, double beta,
                          double proposal_scale, uint64_t seed, size_t burn_in,
                          size_t thin, size_t n_samples, mml_sample** out);
size_t mml_sample_count(const mml_sample* s);
size_t mml_sample_n(const mml_sample* s);
double mml_sample_acceptance_rate(const mml_sample* s);
double mml_sample_tuned_scale(const mml_sample* s);
int mml_sample_acceptance_in_band(const mml_sample* s);
/* Copies configuration `index` (sorted ascending) into out[0..n-1]. */
mml_status mml_sample_configuration(const mml_sample* s, size_t index, double* out);
/* Empirical-vs-equilibrium statistics (CDF distance, linear-statistic
 * variances, outside-support tail fractions), JSON report. */
mml_status mml_sample_ncm_json(const mml_sample* s, const mml_equilibrium* m, char** out);
void mml_sample_free(mml_sample* s);

/* ---- universality sweep -------------------------------------------------- */

/* Runs the full convergence suite from a JSON run-config (see
 * docs/formats.md); returns the report as JSON. */
mml_status mml_universality_run(const char* run_config_json, char** report_json);
/* Windowed Fourier transform of the rescaled kernel slice at lambda0. */
mml_status mml_fourier_diagnostic_json(const mml_kernel* f, double lambda0, double window,
                                       char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MML_H */
