#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "priors/priors.hpp"

using namespace monodens;

namespace {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return d;
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

} // namespace

TEST_SUITE("priors") {

TEST_CASE("base measure closed forms") {
    const auto base = BaseMeasure::bounded(2.0, 1.0);
    CHECK(base.density(0.5) == doctest::Approx(3.0 * 0.25));
    CHECK(base.cdf(0.5) == doctest::Approx(0.125));
    CHECK(base.mean() == doctest::Approx(0.75));
    // kernel marginal: (t+1)(L^t - x^t) / (t L^{t+1})
    CHECK(base.kernel_marginal(0.5) == doctest::Approx(3.0 * (1.0 - 0.25) / 2.0));
    CHECK(base.kernel_marginal(1.0) == 0.0);

    // unbounded with t = 2: marginal has the closed form rate (1 + z) e^{-z} / 2
    const auto tilted = BaseMeasure::unbounded(2.0, 1.5);
    const double x = 0.8;
    const double z = 1.5 * x;
    CHECK(tilted.kernel_marginal(x) == doctest::Approx(1.5 * (1.0 + z) * std::exp(-z) / 2.0).epsilon(1e-10));
    CHECK(tilted.mean() == doctest::Approx(3.0 / 1.5));
    CHECK_THROWS_AS(BaseMeasure::bounded(-0.5, 1.0), Error);
}

TEST_CASE("rate conditions validate for the shipped family") {
    const auto dp = PriorSpec::dirichlet_process(BaseMeasure::bounded(2.0, 1.0), 1.0);
    const auto report = validate_prior_conditions(dp);
    CHECK(report.all_pass());
    CHECK(report.checks.size() == 1);

    const auto finite = PriorSpec::finite_mixture(BaseMeasure::bounded(2.0, 1.0), 50, 1.0);
    const auto full = validate_prior_conditions(finite);
    CHECK(full.all_pass());
    CHECK(full.checks.size() == 3);
}

TEST_CASE("base exponent condition fails for t <= 1") {
    const auto weak = PriorSpec::dirichlet_process(BaseMeasure::bounded(0.5, 1.0), 1.0);
    const auto report = validate_prior_conditions(weak);
    CHECK_FALSE(report.all_pass());
    CHECK(report.checks[0].id == "base_tail_exponent");
    CHECK_FALSE(report.checks[0].pass);
}

TEST_CASE("component-count sandwich fit over K <= 50") {
    const auto spec = PriorSpec::finite_mixture(BaseMeasure::bounded(2.0, 1.0), 50, 1.0);
    const auto q = spec.k_prior();
    double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
    for (std::size_t k = 2; k <= 50; ++k) {
        const double r = -std::log(q[k - 1]) / (k * std::log(static_cast<double>(k)));
        c1 = std::min(c1, r);
        c2 = std::max(c2, r);
    }
    CHECK(c1 > 0.0);
    // normalization pushes the lower fit marginally above 1 (~1.0013)
    CHECK(c1 <= 1.01);
    CHECK(c2 >= 1.0);
    CHECK(c1 <= c2);
    double total = 0.0;
    for (double v : q) total += v;
    CHECK(std::fabs(total - 1.0) <= 1e-12);
}

TEST_CASE("finite prior with K_max = 1 gives a single uniform kernel") {
    const auto spec = PriorSpec::finite_mixture(BaseMeasure::bounded(2.0, 1.0), 1, 1.0);
    const auto draw = sample_prior(spec, 1, 77);
    REQUIRE(draw.size() == 1);
    CHECK(draw.weights()[0] == 1.0);
    const double atom = draw.atoms()[0];
    CHECK(draw.density(atom * 0.5) == doctest::Approx(1.0 / atom));
}

TEST_CASE("type 2 atom marginal matches the base cdf") {
    const auto spec = PriorSpec::finite_mixture(BaseMeasure::bounded(2.0, 1.0), 1, 1.0);
    std::vector<double> atoms(10000);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        atoms[i] = sample_prior(spec, 1, 1000 + i).atoms()[0];
    const double d = ks_statistic(atoms, [](double x) { return std::pow(x, 3.0); });
    CHECK(d < 1.628 / std::sqrt(10000.0)); // 1% critical value
}

TEST_CASE("stick-breaking truncation matches an independent oracle") {
    const double total_mass = 1.0;
    const std::size_t truncation = 500;
    const int draws = 2000;

    std::vector<double> lib_counts(draws);
    const auto spec = PriorSpec::dirichlet_process(BaseMeasure::bounded(2.0, 1.0), total_mass);
    for (int d = 0; d < draws; ++d) {
        const auto mix = sample_prior(spec, truncation, 5000 + d);
        double count = 0;
        for (double w : mix.weights())
            if (w > 1e-4) count += 1;
        lib_counts[d] = count;
    }

    // oracle: plain stick breaking with the standard library generator
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> oracle_counts(draws);
    for (int d = 0; d < draws; ++d) {
        double remaining = 1.0;
        double count = 0;
        for (std::size_t j = 0; j + 1 < truncation; ++j) {
            const double v = 1.0 - std::pow(1.0 - unif(gen), 1.0 / total_mass); // Beta(1, A)
            const double w = v * remaining;
            remaining *= (1.0 - v);
            if (w > 1e-4) count += 1;
        }
        if (remaining > 1e-4) count += 1;
        oracle_counts[d] = count;
    }

    const auto lib = mean_se(lib_counts);
    const auto oracle = mean_se(oracle_counts);
    const double se = std::sqrt(lib.se * lib.se + oracle.se * oracle.se);
    CHECK(std::fabs(lib.mean - oracle.mean) <= 3.0 * se);
}

TEST_CASE("prior predictive draws are valid monotone densities") {
    const auto dp = PriorSpec::dirichlet_process(BaseMeasure::bounded(2.0, 1.0), 2.0);
    const auto finite = PriorSpec::finite_mixture(BaseMeasure::bounded(2.0, 1.0), 200, 1.0);
    for (int d = 0; d < 500; ++d) {
        // StepDensity construction enforces shape and unit mass
        const auto a = sample_prior(dp, 300, 100 + d).to_step_density();
        CHECK(std::fabs(a.integral() - 1.0) <= 1e-10);
        const auto b = sample_prior(finite, 1, 700 + d).to_step_density();
        CHECK(std::fabs(b.integral() - 1.0) <= 1e-10);
        for (double x : {0.1, 0.4, 0.9}) CHECK(b.value(x) >= b.value(x + 0.05) - 1e-12);
    }
}

TEST_CASE("doubling the truncation does not move the prior mean density") {
    const auto spec = PriorSpec::dirichlet_process(BaseMeasure::bounded(2.0, 1.0), 5.0);
    const int draws = 2000;
    std::vector<double> coarse(draws), fine(draws);
    for (int d = 0; d < draws; ++d) {
        coarse[d] = sample_prior(spec, 500, 40000 + d).density(0.5);
        fine[d] = sample_prior(spec, 1000, 80000 + d).density(0.5);
    }
    const auto a = mean_se(coarse);
    const auto b = mean_se(fine);
    CHECK(std::fabs(a.mean - b.mean) <= 3.0 * std::sqrt(a.se * a.se + b.se * b.se));
}

TEST_CASE("unbounded base sampling stays positive and respects the floor") {
    auto base = BaseMeasure::unbounded(2.0, 1.0);
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        CHECK(base.sample(rng) > 0.0);
        CHECK(base.sample_above(3.0, rng) >= 3.0);  // rejection branch
        CHECK(base.sample_above(15.0, rng) >= 15.0); // tilted-exponential branch
    }
}

} // TEST_SUITE
