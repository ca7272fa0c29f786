/*
 * monodens — monotone non-increasing density estimation.
 *
 * Bayesian mixtures of uniforms (Dirichlet-process and finite-mixture
 * priors), the Grenander NPMLE baseline and a seeded Monte Carlo harness,
 * exposed through an extern "C" surface with opaque handles and status
 * codes. Every function returns MD_OK or an md_status error; the message
 * for the last failing call on the current thread is available through
 * md_last_error().
 */

#ifndef MONODENS_H
#define MONODENS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum md_status {
    MD_OK = 0,
    MD_ERR_INVALID_ARGUMENT = 1,
    MD_ERR_DOMAIN = 2,
    MD_ERR_SHAPE_VIOLATION = 3,
    MD_ERR_BOUND_VIOLATION = 4,
    MD_ERR_INVALID_INTERVAL = 5,
    MD_ERR_DEGENERATE_SCALE = 6,
    MD_ERR_CONFIG = 7,
    MD_ERR_IO = 8,
    MD_ERR_RUNTIME = 9,
    MD_ERR_NULL_POINTER = 10
} md_status;

typedef enum md_metric {
    MD_METRIC_L1 = 0,
    MD_METRIC_HELLINGER = 1
} md_metric;

const char* md_version(void);
const char* md_status_name(md_status status);
/* Message of the most recent failing call on this thread; empty string if none. */
const char* md_last_error(void);
/* Frees strings returned through char** out-parameters. */
void md_string_free(char* text);

/* ---- atomic mixing distributions -------------------------------------- */

typedef struct md_mixture md_mixture;

md_status md_mixture_create(const double* atoms, const double* weights, size_t count,
                            md_mixture** out);
void md_mixture_free(md_mixture* mixture);
size_t md_mixture_size(const md_mixture* mixture);
md_status md_mixture_atoms(const md_mixture* mixture, double* out);
md_status md_mixture_weights(const md_mixture* mixture, double* out);
/* f_P(x) = sum_i w_i 1[x <= atom_i] / atom_i */
md_status md_mixture_density(const md_mixture* mixture, double x, double* out);
/* n i.i.d. draws from f_P; identical seed, identical output. */
md_status md_mixture_sample(const md_mixture* mixture, size_t n, uint64_t seed, double* out);

/* ---- step densities ---------------------------------------------------- */

typedef struct md_step_density md_step_density;

/* knots: 0 = u0 < ... < ur (count_knots entries); heights: one per piece,
 * non-increasing, integrating to 1 within 1e-10. */
md_status md_step_create(const double* knots, size_t count_knots, const double* heights,
                         md_step_density** out);
void md_step_free(md_step_density* density);
size_t md_step_piece_count(const md_step_density* density);
md_status md_step_knots(const md_step_density* density, double* out);
md_status md_step_heights(const md_step_density* density, double* out);
md_status md_step_value(const md_step_density* density, double x, double* out);
md_status md_mixture_to_step(const md_mixture* mixture, md_step_density** out);
md_status md_step_to_mixture(const md_step_density* density, md_mixture** out);

/* Exact piecewise distances; no quadrature error for step-step pairs. */
md_status md_step_distance(const md_step_density* f, const md_step_density* g, md_metric metric,
                           double* out);
md_status md_step_sup_distance(const md_step_density* f, const md_step_density* g, double a,
                               double b, double* out);
/* KL(f || g); *infinite is set when f has mass where g vanishes (the kl and
 * second-moment outputs are +inf then, not an error). second_moment may be
 * NULL. */
md_status md_step_kl(const md_step_density* f, const md_step_density* g, double* kl,
                     double* second_moment, int* infinite);

/* ---- constructive KL approximation ------------------------------------- */

typedef double (*md_density_fn)(double x, void* ctx);

/* Adaptive bisection of a monotone non-increasing density f on [0, support]
 * with f(0) <= sup_bound, stopping when the worst sqrt(f) increment eps_k
 * satisfies eps_k^2 <= eps^3. Returns the mixture and, optionally, a JSON
 * trace {breakpoints, piece_count, steps, final_epsilon, epsilon_history,
 * constant_K0}. */
md_status md_approximate(md_density_fn f, void* ctx, double eps, double support, double sup_bound,
                         md_mixture** out, char** trace_json);

/* ---- Grenander NPMLE ---------------------------------------------------- */

typedef struct md_grenander md_grenander;

md_status md_grenander_fit(const double* data, size_t n, md_grenander** out);
void md_grenander_free(md_grenander* fit);
/* The NPMLE as a step density. */
md_status md_grenander_step(const md_grenander* fit, md_step_density** out);
md_status md_grenander_value(const md_grenander* fit, double x, double* out);
/* f_hat(0+), the first majorant slope. */
md_status md_grenander_value_at_zero(const md_grenander* fit, double* out);
/* Boundary-corrected evaluation with c_n = 5 (log n)^{1/3} / eps. */
md_status md_grenander_boundary_value(const md_grenander* fit, double x, size_t n, double eps,
                                      double support_bound, double* out);
/* U_n(a): smallest maximizer of F_n(t) - a t. */
md_status md_inverse_process(const double* data, size_t n, double a, double* out);

/* ---- posterior sampling ------------------------------------------------- */

typedef struct md_posterior md_posterior;

/* config_json: the harness config document (prior + mcmc + seed; truth and
 * experiment blocks are not required). Runs the marginal Gibbs sampler for
 * kind "dp", reversible jump for kind "finite". */
md_status md_posterior_run(const double* data, size_t n, const char* config_json,
                           md_posterior** out);
void md_posterior_free(md_posterior* posterior);
size_t md_posterior_draw_count(const md_posterior* posterior);
md_status md_posterior_draw(const md_posterior* posterior, size_t index, md_mixture** out);
/* inf{t : fraction of draws with f_P(x) <= t exceeds 1/2} */
md_status md_posterior_median_at(const md_posterior* posterior, double x, double* out);
/* Pointwise equal-tail band; lower/upper receive grid_size entries. */
md_status md_posterior_band(const md_posterior* posterior, const double* grid, size_t grid_size,
                            double level, double* lower, double* upper);
/* Smallest radius covering at least `mass` of the draws around a step
 * reference under the chosen metric. */
md_status md_posterior_radius(const md_posterior* posterior, const md_step_density* reference,
                              md_metric metric, double mass, double* out);

/* Effective sample size (initial-positive-sequence estimator); *degenerate
 * flags a constant trace (ess = n then). */
md_status md_effective_sample_size(const double* trace, size_t n, double* ess, int* degenerate);

/* ---- experiments -------------------------------------------------------- */

/* kind: "rate", "boundary" or "supnorm". Writes report.json, radii.csv
 * (boundary.csv for boundary runs) and plot.svg under the config's
 * output_dir (or output_dir_override when non-NULL). threads parallelizes
 * replications without changing any output byte. report_json_out (optional)
 * receives the report document. */
md_status md_experiment_run(const char* kind, const char* config_json,
                            const char* output_dir_override, int threads, char** report_json_out);

/* One dataset -> posterior summaries written to output_dir/summary.json
 * (plus draws/draws.jsonl when emit_draws). summary_json_out optional. */
md_status md_fit_run(const double* data, size_t n, const char* config_json, const char* output_dir,
                     int emit_draws, char** summary_json_out);

/* Renders the SVG chart for a previously produced report document. */
md_status md_render_report_svg(const char* report_json, char** svg_out);

#ifdef __cplusplus
}
#endif

#endif /* MONODENS_H */
