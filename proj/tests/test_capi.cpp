#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "monodens.h"

namespace {

double triangular_cb(double x, void*) { return x <= 1.0 ? 2.0 * (1.0 - x) : 0.0; }

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("monodens_capi_") + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
    CHECK(std::string(md_version()) == "0.1.0");
    CHECK(std::string(md_status_name(MD_OK)) == "ok");
    CHECK(std::string(md_status_name(MD_ERR_CONFIG)) == "config_error");
}

TEST_CASE("mixture lifecycle and errors") {
    const double atoms[] = {0.5, 1.0};
    const double weights[] = {0.5, 0.5};
    md_mixture* mix = nullptr;
    REQUIRE(md_mixture_create(atoms, weights, 2, &mix) == MD_OK);
    CHECK(md_mixture_size(mix) == 2);

    double value = 0.0;
    CHECK(md_mixture_density(mix, 0.25, &value) == MD_OK);
    CHECK(value == doctest::Approx(1.5));
    CHECK(md_mixture_density(mix, -1.0, &value) == MD_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(md_last_error()) > 0);

    std::vector<double> sample(256);
    CHECK(md_mixture_sample(mix, sample.size(), 7, sample.data()) == MD_OK);
    std::vector<double> again(256);
    CHECK(md_mixture_sample(mix, again.size(), 7, again.data()) == MD_OK);
    CHECK(sample == again);
    md_mixture_free(mix);

    const double bad_weights[] = {0.5, 0.4};
    md_mixture* rejected = nullptr;
    CHECK(md_mixture_create(atoms, bad_weights, 2, &rejected) == MD_ERR_INVALID_ARGUMENT);
    CHECK(md_mixture_create(nullptr, weights, 2, &rejected) == MD_ERR_NULL_POINTER);
}

TEST_CASE("step densities and hand distances") {
    const double knots1[] = {0.0, 1.0};
    const double heights1[] = {1.0};
    const double knots2[] = {0.0, 2.0};
    const double heights2[] = {0.5};
    md_step_density* u1 = nullptr;
    md_step_density* u2 = nullptr;
    REQUIRE(md_step_create(knots1, 2, heights1, &u1) == MD_OK);
    REQUIRE(md_step_create(knots2, 2, heights2, &u2) == MD_OK);

    double value = 0.0;
    CHECK(md_step_distance(u1, u2, MD_METRIC_L1, &value) == MD_OK);
    CHECK(std::fabs(value - 1.0) <= 1e-9);
    CHECK(md_step_distance(u1, u2, MD_METRIC_HELLINGER, &value) == MD_OK);
    CHECK(std::fabs(value - std::sqrt(1.0 - std::sqrt(0.5))) <= 1e-9);
    CHECK(md_step_sup_distance(u1, u2, 0.1, 0.4, &value) == MD_OK);
    CHECK(value == doctest::Approx(0.5));
    CHECK(md_step_sup_distance(u1, u2, 3.0, 4.0, &value) == MD_ERR_INVALID_INTERVAL);

    double kl = 0.0, second = 0.0;
    int infinite = 0;
    CHECK(md_step_kl(u1, u2, &kl, &second, &infinite) == MD_OK);
    CHECK(infinite == 0);
    CHECK(std::fabs(kl - std::log(2.0)) <= 1e-9);
    CHECK(md_step_kl(u2, u1, &kl, nullptr, &infinite) == MD_OK);
    CHECK(infinite == 1);

    md_mixture* mix = nullptr;
    CHECK(md_step_to_mixture(u2, &mix) == MD_OK);
    CHECK(md_mixture_size(mix) == 1);
    md_mixture_free(mix);
    md_step_free(u1);
    md_step_free(u2);
}

TEST_CASE("approximation through the callback") {
    md_mixture* mix = nullptr;
    char* trace = nullptr;
    REQUIRE(md_approximate(&triangular_cb, nullptr, 0.1, 1.0, 2.0, &mix, &trace) == MD_OK);
    CHECK(md_mixture_size(mix) >= 1);
    const auto doc = nlohmann::json::parse(trace);
    CHECK(doc.at("piece_count").get<std::size_t>() >= 1);
    CHECK(doc.at("constant_K0").get<double>() == doctest::Approx(14.6059).epsilon(1e-4));
    md_string_free(trace);
    md_mixture_free(mix);

    // bound violation surfaces as a status code
    md_mixture* bad = nullptr;
    CHECK(md_approximate(&triangular_cb, nullptr, 0.1, 1.0, 1.5, &bad, nullptr) ==
          MD_ERR_BOUND_VIOLATION);
}

TEST_CASE("grenander and the inverse process") {
    const double data[] = {0.2, 0.4, 0.9};
    md_grenander* fit = nullptr;
    REQUIRE(md_grenander_fit(data, 3, &fit) == MD_OK);
    double value = 0.0;
    CHECK(md_grenander_value(fit, 0.3, &value) == MD_OK);
    CHECK(value == doctest::Approx(5.0 / 3.0));
    CHECK(md_grenander_value_at_zero(fit, &value) == MD_OK);
    CHECK(value == doctest::Approx(5.0 / 3.0));

    md_step_density* step = nullptr;
    CHECK(md_grenander_step(fit, &step) == MD_OK);
    CHECK(md_step_piece_count(step) == 2);
    md_step_free(step);
    md_grenander_free(fit);

    CHECK(md_inverse_process(data, 3, 1e-9, &value) == MD_OK);
    CHECK(value == doctest::Approx(0.9));
    CHECK(md_grenander_fit(data, 0, &fit) == MD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("posterior run from a config document") {
    const char* config = R"({
      "prior": {"kind": "dp", "A": 1.0, "t": 2.0, "L": 1.0},
      "mcmc": {"iterations": 300, "burn_in": 60, "thinning": 2},
      "seed": 5
    })";
    std::vector<double> data;
    for (int i = 1; i <= 100; ++i) data.push_back(static_cast<double>(i) / 101.0);

    md_posterior* posterior = nullptr;
    REQUIRE(md_posterior_run(data.data(), data.size(), config, &posterior) == MD_OK);
    CHECK(md_posterior_draw_count(posterior) == 120);

    double median = 0.0;
    CHECK(md_posterior_median_at(posterior, 0.5, &median) == MD_OK);
    CHECK(median > 0.0);

    const double grid[] = {0.25, 0.5, 0.75};
    double lower[3], upper[3];
    CHECK(md_posterior_band(posterior, grid, 3, 0.9, lower, upper) == MD_OK);
    for (int g = 0; g < 3; ++g) CHECK(lower[g] <= upper[g]);

    md_mixture* draw = nullptr;
    CHECK(md_posterior_draw(posterior, 0, &draw) == MD_OK);
    CHECK(md_mixture_size(draw) >= 1);
    md_mixture_free(draw);
    CHECK(md_posterior_draw(posterior, 999999, &draw) == MD_ERR_INVALID_ARGUMENT);

    const double knots[] = {0.0, 1.0};
    const double heights[] = {1.0};
    md_step_density* reference = nullptr;
    REQUIRE(md_step_create(knots, 2, heights, &reference) == MD_OK);
    double radius = 0.0;
    CHECK(md_posterior_radius(posterior, reference, MD_METRIC_L1, 0.9, &radius) == MD_OK);
    CHECK(radius > 0.0);
    md_step_free(reference);
    md_posterior_free(posterior);

    md_posterior* rejected = nullptr;
    CHECK(md_posterior_run(data.data(), data.size(), "{}", &rejected) == MD_ERR_CONFIG);
}

TEST_CASE("effective sample size") {
    std::vector<double> trace(64);
    for (std::size_t i = 0; i < trace.size(); ++i) trace[i] = static_cast<double>(i % 7);
    double ess = 0.0;
    int degenerate = 0;
    CHECK(md_effective_sample_size(trace.data(), trace.size(), &ess, &degenerate) == MD_OK);
    CHECK(ess > 0.0);
    std::vector<double> constant(50, 1.0);
    CHECK(md_effective_sample_size(constant.data(), constant.size(), &ess, &degenerate) == MD_OK);
    CHECK(degenerate == 1);
}

TEST_CASE("experiment round trip through the shared library") {
    const auto dir = temp_dir("experiment");
    const std::string config = R"({
      "scenario": "capi-smoke",
      "prior": {"kind": "dp", "A": 1.0, "t": 2.0, "L": 1.0},
      "truth": {"family": "triangular", "params": [1.0]},
      "mcmc": {"iterations": 200, "burn_in": 40, "thinning": 2},
      "experiment": {"n_grid": [60, 120], "replications": 2, "loss": "l1"},
      "seed": 9,
      "output_dir": "unused"
    })";

    char* report = nullptr;
    REQUIRE(md_experiment_run("rate", config.c_str(), dir.string().c_str(), 2, &report) == MD_OK);
    REQUIRE(report != nullptr);
    const auto doc = nlohmann::json::parse(report);
    CHECK(doc.at("scenario") == "capi-smoke");
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "radii.csv"));
    CHECK(std::filesystem::exists(dir / "plot.svg"));

    char* svg = nullptr;
    CHECK(md_render_report_svg(report, &svg) == MD_OK);
    CHECK(std::string(svg).find("</svg>") != std::string::npos);
    md_string_free(svg);
    md_string_free(report);

    CHECK(md_experiment_run("rate", "{\"bogus\": 1}", dir.string().c_str(), 1, nullptr) ==
          MD_ERR_CONFIG);
    CHECK(md_experiment_run("sideways", config.c_str(), dir.string().c_str(), 1, nullptr) ==
          MD_ERR_INVALID_ARGUMENT);
    // supnorm demands a sup loss
    CHECK(md_experiment_run("supnorm", config.c_str(), dir.string().c_str(), 1, nullptr) ==
          MD_ERR_CONFIG);
    std::filesystem::remove_all(dir);
}

TEST_CASE("boundary experiment through the shared library") {
    const auto dir = temp_dir("boundary");
    const std::string config = R"({
      "prior": {"kind": "dp", "A": 1.0, "t": 2.0, "L": 1.0},
      "truth": {"family": "triangular", "params": [1.0]},
      "mcmc": {"iterations": 200, "burn_in": 40, "thinning": 2},
      "experiment": {"n_grid": [250, 500], "replications": 2, "loss": "l1"},
      "seed": 13,
      "output_dir": "unused"
    })";
    char* report = nullptr;
    REQUIRE(md_experiment_run("boundary", config.c_str(), dir.string().c_str(), 1, &report) == MD_OK);
    const auto doc = nlohmann::json::parse(report);
    CHECK(doc.at("type") == "boundary");
    CHECK(std::filesystem::exists(dir / "boundary.csv"));
    md_string_free(report);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fit through the shared library") {
    const auto dir = temp_dir("fit");
    const char* config = R"({
      "prior": {"kind": "dp", "A": 1.0, "t": 2.0, "L": 1.0},
      "mcmc": {"iterations": 200, "burn_in": 40, "thinning": 2},
      "seed": 5
    })";
    std::vector<double> data;
    for (int i = 1; i <= 80; ++i) data.push_back(static_cast<double>(i) / 81.0);
    char* summary = nullptr;
    REQUIRE(md_fit_run(data.data(), data.size(), config, dir.string().c_str(), 1, &summary) == MD_OK);
    const auto doc = nlohmann::json::parse(summary);
    CHECK(doc.at("n") == 80);
    md_string_free(summary);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "draws" / "draws.jsonl"));
    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
