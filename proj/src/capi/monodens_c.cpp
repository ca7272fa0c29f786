#include "monodens.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "core/distance.hpp"
#include "core/errors.hpp"
#include "core/mixture.hpp"
#include "core/partition.hpp"
#include "experiments/config.hpp"
#include "experiments/harness.hpp"
#include "experiments/report.hpp"
#include "grenander/grenander.hpp"
#include "mcmc/mcmc.hpp"
#include "summaries/summaries.hpp"

using namespace monodens;

struct md_mixture {
    AtomicMixture value;
};
struct md_step_density {
    StepDensity value;
};
struct md_grenander {
    GrenanderFit value;
};
struct md_posterior {
    PosteriorDraws value;
};

namespace {

thread_local std::string g_last_error;

md_status map_code(errc code) {
    switch (code) {
    case errc::invalid_argument: return MD_ERR_INVALID_ARGUMENT;
    case errc::domain_error: return MD_ERR_DOMAIN;
    case errc::shape_violation: return MD_ERR_SHAPE_VIOLATION;
    case errc::bound_violation: return MD_ERR_BOUND_VIOLATION;
    case errc::invalid_interval: return MD_ERR_INVALID_INTERVAL;
    case errc::degenerate_scale: return MD_ERR_DEGENERATE_SCALE;
    case errc::config_error: return MD_ERR_CONFIG;
    case errc::io_error: return MD_ERR_IO;
    case errc::runtime_error: return MD_ERR_RUNTIME;
    }
    return MD_ERR_RUNTIME;
}

template <typename Fn>
md_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MD_ERR_RUNTIME;
    }
}

md_status null_arg(const char* what) {
    g_last_error = std::string(what) + " is NULL";
    return MD_ERR_NULL_POINTER;
}

char* dup_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* md_version(void) { return "0.1.0"; }

const char* md_status_name(md_status status) {
    switch (status) {
    case MD_OK: return "ok";
    case MD_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MD_ERR_DOMAIN: return "domain_error";
    case MD_ERR_SHAPE_VIOLATION: return "shape_violation";
    case MD_ERR_BOUND_VIOLATION: return "bound_violation";
    case MD_ERR_INVALID_INTERVAL: return "invalid_interval";
    case MD_ERR_DEGENERATE_SCALE: return "degenerate_scale";
    case MD_ERR_CONFIG: return "config_error";
    case MD_ERR_IO: return "io_error";
    case MD_ERR_RUNTIME: return "runtime_error";
    case MD_ERR_NULL_POINTER: return "null_pointer";
    }
    return "unknown";
}

const char* md_last_error(void) { return g_last_error.c_str(); }

void md_string_free(char* text) { delete[] text; }

/* ---- mixture ---- */

md_status md_mixture_create(const double* atoms, const double* weights, size_t count,
                            md_mixture** out) {
    if (!atoms || !weights || !out) return null_arg("argument");
    return guarded([&] {
        *out = new md_mixture{AtomicMixture(std::vector<double>(atoms, atoms + count),
                                            std::vector<double>(weights, weights + count))};
    });
}

void md_mixture_free(md_mixture* mixture) { delete mixture; }

size_t md_mixture_size(const md_mixture* mixture) { return mixture ? mixture->value.size() : 0; }

md_status md_mixture_atoms(const md_mixture* mixture, double* out) {
    if (!mixture || !out) return null_arg("argument");
    std::memcpy(out, mixture->value.atoms().data(), mixture->value.size() * sizeof(double));
    return MD_OK;
}

md_status md_mixture_weights(const md_mixture* mixture, double* out) {
    if (!mixture || !out) return null_arg("argument");
    std::memcpy(out, mixture->value.weights().data(), mixture->value.size() * sizeof(double));
    return MD_OK;
}

md_status md_mixture_density(const md_mixture* mixture, double x, double* out) {
    if (!mixture || !out) return null_arg("argument");
    return guarded([&] { *out = mixture->value.density(x); });
}

md_status md_mixture_sample(const md_mixture* mixture, size_t n, uint64_t seed, double* out) {
    if (!mixture || (!out && n > 0)) return null_arg("argument");
    return guarded([&] {
        const auto sample = sample_iid(mixture->value, n, seed);
        std::memcpy(out, sample.data(), sample.size() * sizeof(double));
    });
}

/* ---- step density ---- */

md_status md_step_create(const double* knots, size_t count_knots, const double* heights,
                         md_step_density** out) {
    if (!knots || !heights || !out) return null_arg("argument");
    return guarded([&] {
        *out = new md_step_density{
            StepDensity(std::vector<double>(knots, knots + count_knots),
                        std::vector<double>(heights, heights + (count_knots ? count_knots - 1 : 0)))};
    });
}

void md_step_free(md_step_density* density) { delete density; }

size_t md_step_piece_count(const md_step_density* density) {
    return density ? density->value.piece_count() : 0;
}

md_status md_step_knots(const md_step_density* density, double* out) {
    if (!density || !out) return null_arg("argument");
    std::memcpy(out, density->value.knots().data(), density->value.knots().size() * sizeof(double));
    return MD_OK;
}

md_status md_step_heights(const md_step_density* density, double* out) {
    if (!density || !out) return null_arg("argument");
    std::memcpy(out, density->value.heights().data(),
                density->value.heights().size() * sizeof(double));
    return MD_OK;
}

md_status md_step_value(const md_step_density* density, double x, double* out) {
    if (!density || !out) return null_arg("argument");
    return guarded([&] { *out = density->value.value(x); });
}

md_status md_mixture_to_step(const md_mixture* mixture, md_step_density** out) {
    if (!mixture || !out) return null_arg("argument");
    return guarded([&] { *out = new md_step_density{mixture->value.to_step_density()}; });
}

md_status md_step_to_mixture(const md_step_density* density, md_mixture** out) {
    if (!density || !out) return null_arg("argument");
    return guarded([&] { *out = new md_mixture{density->value.to_mixture()}; });
}

md_status md_step_distance(const md_step_density* f, const md_step_density* g, md_metric metric,
                           double* out) {
    if (!f || !g || !out) return null_arg("argument");
    return guarded([&] {
        *out = distance(f->value, g->value,
                        metric == MD_METRIC_L1 ? Metric::L1 : Metric::Hellinger);
    });
}

md_status md_step_sup_distance(const md_step_density* f, const md_step_density* g, double a,
                               double b, double* out) {
    if (!f || !g || !out) return null_arg("argument");
    return guarded([&] { *out = distance(f->value, g->value, Metric::SupOnInterval, a, b); });
}

md_status md_step_kl(const md_step_density* f, const md_step_density* g, double* kl,
                     double* second_moment, int* infinite) {
    if (!f || !g || !kl || !infinite) return null_arg("argument");
    return guarded([&] {
        const auto result = kl_divergence(f->value, g->value);
        *kl = result.kl;
        if (second_moment) *second_moment = result.second_moment;
        *infinite = result.infinite ? 1 : 0;
    });
}

/* ---- adaptive approximation ---- */

md_status md_approximate(md_density_fn f, void* ctx, double eps, double support, double sup_bound,
                         md_mixture** out, char** trace_json) {
    if (!f || !out) return null_arg("argument");
    return guarded([&] {
        auto [mixture, trace] =
            adaptive_kl_partition([f, ctx](double x) { return f(x, ctx); }, eps, support, sup_bound);
        *out = new md_mixture{std::move(mixture)};
        if (trace_json) {
            nlohmann::ordered_json doc;
            doc["breakpoints"] = trace.breakpoints;
            doc["piece_count"] = trace.piece_count;
            doc["steps"] = trace.steps;
            doc["final_epsilon"] = trace.final_epsilon;
            doc["epsilon_history"] = trace.epsilon_history;
            doc["constant_K0"] = trace.constant_K0;
            *trace_json = dup_string(doc.dump(2));
        }
    });
}

/* ---- Grenander ---- */

md_status md_grenander_fit(const double* data, size_t n, md_grenander** out) {
    if (!data || !out) return null_arg("argument");
    return guarded([&] { *out = new md_grenander{GrenanderFit(std::vector<double>(data, data + n))}; });
}

void md_grenander_free(md_grenander* fit) { delete fit; }

md_status md_grenander_step(const md_grenander* fit, md_step_density** out) {
    if (!fit || !out) return null_arg("argument");
    return guarded([&] { *out = new md_step_density{fit->value.density()}; });
}

md_status md_grenander_value(const md_grenander* fit, double x, double* out) {
    if (!fit || !out) return null_arg("argument");
    return guarded([&] { *out = fit->value.density().value(x); });
}

md_status md_grenander_value_at_zero(const md_grenander* fit, double* out) {
    if (!fit || !out) return null_arg("argument");
    *out = fit->value.value_at_zero();
    return MD_OK;
}

md_status md_grenander_boundary_value(const md_grenander* fit, double x, size_t n, double eps,
                                      double support_bound, double* out) {
    if (!fit || !out) return null_arg("argument");
    return guarded([&] { *out = boundary_modified_eval(fit->value, x, n, eps, support_bound); });
}

md_status md_inverse_process(const double* data, size_t n, double a, double* out) {
    if (!data || !out) return null_arg("argument");
    return guarded([&] { *out = inverse_process(std::vector<double>(data, data + n), a); });
}

/* ---- posterior ---- */

md_status md_posterior_run(const double* data, size_t n, const char* config_json,
                           md_posterior** out) {
    if ((!data && n > 0) || !config_json || !out) return null_arg("argument");
    return guarded([&] {
        const Config cfg = parse_config(config_json, /*need_truth=*/false);
        ChainConfig chain_cfg = cfg.mcmc;
        chain_cfg.seed = cfg.seed;
        std::vector<double> values(data, data + n);
        PosteriorDraws draws = cfg.prior_spec().kind == PriorKind::DirichletProcess
                                   ? run_dp_posterior(values, cfg.prior_spec(), chain_cfg)
                                   : run_finite_mixture_posterior(values, cfg.prior_spec(), chain_cfg);
        *out = new md_posterior{std::move(draws)};
    });
}

void md_posterior_free(md_posterior* posterior) { delete posterior; }

size_t md_posterior_draw_count(const md_posterior* posterior) {
    return posterior ? posterior->value.draws.size() : 0;
}

md_status md_posterior_draw(const md_posterior* posterior, size_t index, md_mixture** out) {
    if (!posterior || !out) return null_arg("argument");
    return guarded([&] {
        require(index < posterior->value.draws.size(), errc::invalid_argument,
                "md_posterior_draw: index out of range");
        *out = new md_mixture{posterior->value.draws[index]};
    });
}

md_status md_posterior_median_at(const md_posterior* posterior, double x, double* out) {
    if (!posterior || !out) return null_arg("argument");
    return guarded([&] { *out = posterior_median_pointwise(posterior->value, x); });
}

md_status md_posterior_band(const md_posterior* posterior, const double* grid, size_t grid_size,
                            double level, double* lower, double* upper) {
    if (!posterior || !grid || !lower || !upper) return null_arg("argument");
    return guarded([&] {
        const auto band =
            credible_band(posterior->value, std::vector<double>(grid, grid + grid_size), level);
        std::memcpy(lower, band.lower.data(), band.lower.size() * sizeof(double));
        std::memcpy(upper, band.upper.data(), band.upper.size() * sizeof(double));
    });
}

md_status md_posterior_radius(const md_posterior* posterior, const md_step_density* reference,
                              md_metric metric, double mass, double* out) {
    if (!posterior || !reference || !out) return null_arg("argument");
    return guarded([&] {
        *out = posterior_radius(posterior->value, ReferenceDensity{reference->value},
                                metric == MD_METRIC_L1 ? Metric::L1 : Metric::Hellinger, mass);
    });
}

md_status md_effective_sample_size(const double* trace, size_t n, double* ess, int* degenerate) {
    if (!trace || !ess || !degenerate) return null_arg("argument");
    return guarded([&] {
        const auto result = effective_sample_size(std::vector<double>(trace, trace + n));
        *ess = result.ess;
        *degenerate = result.degenerate ? 1 : 0;
    });
}

/* ---- experiments ---- */

md_status md_experiment_run(const char* kind, const char* config_json,
                            const char* output_dir_override, int threads, char** report_json_out) {
    if (!kind || !config_json) return null_arg("argument");
    return guarded([&] {
        const std::string kind_name(kind);
        const Config cfg = parse_config(config_json, /*need_truth=*/true);
        const std::string out_dir = output_dir_override ? output_dir_override : cfg.output_dir;

        nlohmann::ordered_json report;
        if (kind_name == "rate" || kind_name == "supnorm") {
            require(kind_name != "supnorm" || cfg.experiment.loss == LossKind::Sup, errc::config_error,
                    "supnorm runs need experiment.loss = \"sup\"");
            report = rate_report_json(run_rate_experiment(cfg, threads));
        } else if (kind_name == "boundary") {
            report = boundary_report_json(run_boundary_experiment(cfg, threads));
        } else {
            fail(errc::invalid_argument, "md_experiment_run: kind must be rate, boundary or supnorm");
        }
        write_report_files(report, out_dir);
        if (report_json_out) *report_json_out = dup_string(report.dump(2) + "\n");
    });
}

md_status md_fit_run(const double* data, size_t n, const char* config_json, const char* output_dir,
                     int emit_draws, char** summary_json_out) {
    if (!data || !config_json || !output_dir) return null_arg("argument");
    return guarded([&] {
        const Config cfg = parse_config(config_json, /*need_truth=*/false);
        const auto summary =
            run_fit(std::vector<double>(data, data + n), cfg, output_dir, emit_draws != 0);
        if (summary_json_out) *summary_json_out = dup_string(summary.dump(2) + "\n");
    });
}

md_status md_render_report_svg(const char* report_json, char** svg_out) {
    if (!report_json || !svg_out) return null_arg("argument");
    return guarded([&] {
        nlohmann::ordered_json doc;
        try {
            doc = nlohmann::ordered_json::parse(report_json);
        } catch (const nlohmann::json::exception& e) {
            fail(errc::invalid_argument, std::string("report is not valid JSON: ") + e.what());
        }
        *svg_out = dup_string(render_report_svg(doc));
    });
}

} // extern "C"
