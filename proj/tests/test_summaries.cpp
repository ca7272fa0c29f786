#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "core/errors.hpp"
#include "summaries/summaries.hpp"

using namespace monodens;

namespace {

PosteriorDraws draws_from(std::vector<AtomicMixture> mixtures) {
    PosteriorDraws d;
    d.draws = std::move(mixtures);
    return d;
}

AtomicMixture single_atom(double theta) { return AtomicMixture({theta}, {1.0}); }

} // namespace

TEST_SUITE("summaries") {

TEST_CASE("posterior median follows the strict-inequality definition") {
    // at x = 0.25 the kernels 1/theta give values 1, 2, 3, 4
    const double x = 0.25;
    auto odd = draws_from({single_atom(1.0), single_atom(0.5), single_atom(1.0 / 3.0)});
    CHECK(posterior_median_pointwise(odd, x) == doctest::Approx(2.0));

    auto even = draws_from({single_atom(1.0), single_atom(0.5), single_atom(1.0 / 3.0), single_atom(0.25)});
    // fraction <= 2 is exactly 1/2, not > 1/2, so the median is 3
    CHECK(posterior_median_pointwise(even, x) == doctest::Approx(3.0));

    auto constant = draws_from({single_atom(0.5), single_atom(0.5), single_atom(0.5)});
    CHECK(posterior_median_pointwise(constant, x) == doctest::Approx(2.0));
}

TEST_CASE("posterior median is non-increasing in x") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> atom(0.05, 2.0);
    std::vector<AtomicMixture> mixtures;
    for (int d = 0; d < 25; ++d) {
        const double a = atom(gen);
        const double b = atom(gen);
        const double lo = std::min(a, b), hi = std::max(a, b) + 0.01;
        mixtures.push_back(AtomicMixture({lo, hi}, {0.4, 0.6}));
    }
    const auto draws = draws_from(std::move(mixtures));
    double prev = std::numeric_limits<double>::infinity();
    for (int g = 0; g <= 40; ++g) {
        const double x = 2.2 * g / 40.0;
        const double median = posterior_median_pointwise(draws, x);
        CHECK(median <= prev + 1e-12);
        prev = median;
    }
}

TEST_CASE("radius at mass is the empirical quantile") {
    LossSample losses;
    losses.metric = "L1";
    for (int i = 1; i <= 10; ++i) losses.distances.push_back(0.1 * i);
    CHECK(radius_at_mass(losses, 0.9) == doctest::Approx(0.9));
    CHECK(radius_at_mass(losses, 1.0) == doctest::Approx(1.0));
    CHECK(radius_at_mass(losses, 0.05) == doctest::Approx(0.1));
    // monotone in mass
    double prev = 0.0;
    for (double mass : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double r = radius_at_mass(losses, mass);
        CHECK(r >= prev);
        prev = r;
    }
    LossSample constant;
    constant.distances.assign(7, 0.1);
    for (double mass : {0.2, 0.6, 1.0}) CHECK(radius_at_mass(constant, mass) == doctest::Approx(0.1));

    LossSample all_infinite;
    all_infinite.distances.assign(4, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(radius_at_mass(all_infinite, 0.9), Error);
    CHECK_THROWS_AS(radius_at_mass(losses, 0.0), Error);
}

TEST_CASE("posterior radius around a step reference") {
    auto draws = draws_from({single_atom(2.0), single_atom(2.0)});
    const StepDensity reference({0.0, 1.0}, {1.0});
    // every draw is Uniform[0,2]: L1 distance 1 each
    CHECK(posterior_radius(draws, ReferenceDensity{reference}, Metric::L1, 0.5) == doctest::Approx(1.0));
    CHECK(posterior_radius(draws, ReferenceDensity{reference}, Metric::L1, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("pointwise loss sample") {
    auto draws = draws_from({single_atom(1.0), single_atom(0.5)});
    const auto losses = compute_pointwise_loss(draws, 0.25, 1.5);
    REQUIRE(losses.distances.size() == 2);
    CHECK(losses.distances[0] == doctest::Approx(0.5));
    CHECK(losses.distances[1] == doctest::Approx(0.5));
}

TEST_CASE("credible band: two-draw example and ordering") {
    auto draws = draws_from({single_atom(1.0), single_atom(2.0)});
    const auto band = credible_band(draws, {0.5}, 0.5);
    CHECK(band.lower[0] == doctest::Approx(0.5));
    CHECK(band.upper[0] == doctest::Approx(1.0));

    auto constant = draws_from({single_atom(1.0), single_atom(1.0), single_atom(1.0)});
    const auto zero_width = credible_band(constant, {0.2, 0.8}, 0.9);
    for (std::size_t g = 0; g < 2; ++g) CHECK(zero_width.lower[g] == zero_width.upper[g]);
}

TEST_CASE("band contains the median for level >= 0.5") {
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> atom(0.1, 2.0);
    std::vector<AtomicMixture> mixtures;
    for (int d = 0; d < 31; ++d) mixtures.push_back(single_atom(atom(gen)));
    const auto draws = draws_from(std::move(mixtures));
    const std::vector<double> grid = {0.05, 0.3, 0.7, 1.1, 1.9};
    for (double level : {0.5, 0.8, 0.99}) {
        const auto band = credible_band(draws, grid, level);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double median = posterior_median_pointwise(draws, grid[g]);
            CHECK(band.lower[g] <= median + 1e-12);
            CHECK(band.upper[g] >= median - 1e-12);
            CHECK(band.lower[g] <= band.upper[g]);
        }
    }
    // level -> limits: near 0 collapses to the median, near 1 reaches the hull
    const auto tight = credible_band(draws, grid, 1e-9);
    const auto wide = credible_band(draws, grid, 1.0 - 1e-9);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        CHECK(tight.lower[g] <= tight.upper[g]);
        CHECK(wide.lower[g] <= tight.lower[g] + 1e-12);
        CHECK(wide.upper[g] >= tight.upper[g] - 1e-12);
    }
}

TEST_CASE("posterior mean curve is reported") {
    auto draws = draws_from({single_atom(1.0), single_atom(2.0)});
    const auto mean = posterior_mean_curve(draws, {0.5, 1.5});
    CHECK(mean[0] == doctest::Approx(0.75)); // (1 + 0.5) / 2
    CHECK(mean[1] == doctest::Approx(0.25)); // (0 + 0.5) / 2
}

TEST_CASE("loss sample over draws against references") {
    auto draws = draws_from({single_atom(1.0), single_atom(2.0)});
    const StepDensity reference({0.0, 1.0}, {1.0});
    const auto losses = compute_loss_sample(draws, ReferenceDensity{reference}, Metric::L1);
    REQUIRE(losses.distances.size() == 2);
    CHECK(losses.distances[0] == doctest::Approx(0.0));
    CHECK(losses.distances[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(compute_loss_sample(draws_from({}), ReferenceDensity{reference}, Metric::L1), Error);
}

} // TEST_SUITE
