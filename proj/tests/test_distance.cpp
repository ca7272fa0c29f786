#include <doctest.h>

#include <cmath>
#include <random>

#include "core/distance.hpp"
#include "core/errors.hpp"

using namespace monodens;

namespace {

const StepDensity& uniform01() {
    static const StepDensity f({0.0, 1.0}, {1.0});
    return f;
}

const StepDensity& uniform02() {
    static const StepDensity f({0.0, 2.0}, {0.5});
    return f;
}

// random non-increasing step density on [0, ~2]
StepDensity random_step(std::mt19937& gen) {
    std::uniform_int_distribution<int> pieces(1, 6);
    std::uniform_real_distribution<double> width(0.05, 0.6);
    std::uniform_real_distribution<double> drop(0.0, 1.0);
    const int r = pieces(gen);
    std::vector<double> knots = {0.0};
    std::vector<double> raw(r);
    for (int j = 0; j < r; ++j) knots.push_back(knots.back() + width(gen));
    double level = 1.0;
    for (int j = 0; j < r; ++j) {
        raw[j] = level;
        level *= drop(gen);
    }
    double mass = 0.0;
    for (int j = 0; j < r; ++j) mass += raw[j] * (knots[j + 1] - knots[j]);
    for (auto& h : raw) h /= mass;
    return StepDensity(knots, raw);
}

} // namespace

TEST_SUITE("distance") {

TEST_CASE("hand values for the Uniform[0,1] / Uniform[0,2] pair") {
    CHECK(distance(uniform01(), uniform01(), Metric::L1) == 0.0);
    CHECK(std::fabs(distance(uniform01(), uniform02(), Metric::L1) - 1.0) <= 1e-9);
    const double hellinger_exact = std::sqrt(1.0 - std::sqrt(0.5));
    CHECK(std::fabs(distance(uniform01(), uniform02(), Metric::Hellinger) - hellinger_exact) <= 1e-9);
    CHECK(hellinger_exact == doctest::Approx(0.54120).epsilon(1e-4));
    CHECK(std::fabs(distance(uniform01(), uniform02(), Metric::SupOnInterval, 0.1, 0.4) - 0.5) <= 1e-12);
}

TEST_CASE("kullback-leibler closed forms") {
    const auto same = kl_divergence(uniform01(), uniform01());
    CHECK(same.kl == 0.0);
    CHECK_FALSE(same.infinite);

    const auto forward = kl_divergence(uniform01(), uniform02());
    CHECK_FALSE(forward.infinite);
    CHECK(std::fabs(forward.kl - std::log(2.0)) <= 1e-9);
    CHECK(std::fabs(forward.second_moment - std::log(2.0) * std::log(2.0)) <= 1e-9);

    const auto backward = kl_divergence(uniform02(), uniform01());
    CHECK(backward.infinite);
    CHECK(std::isinf(backward.kl));
}

TEST_CASE("kl dominates twice the squared hellinger distance") {
    // convention check once on the closed-form pair: KL = log 2 >= 2 h^2 = 2 (1 - sqrt(.5))
    CHECK(std::log(2.0) >= 2.0 * (1.0 - std::sqrt(0.5)));
    std::mt19937 gen(5);
    int checked = 0;
    while (checked < 200) {
        auto f = random_step(gen);
        auto g = random_step(gen);
        const auto kl = kl_divergence(f, g);
        if (kl.infinite) continue;
        const double h = distance(f, g, Metric::Hellinger);
        CHECK(kl.kl >= 2.0 * h * h - 1e-9);
        ++checked;
    }
}

TEST_CASE("metric axioms on random triples") {
    std::mt19937 gen(17);
    for (int rep = 0; rep < 200; ++rep) {
        const auto f = random_step(gen);
        const auto g = random_step(gen);
        const auto h = random_step(gen);
        for (Metric metric : {Metric::L1, Metric::Hellinger}) {
            const double fg = distance(f, g, metric);
            const double gf = distance(g, f, metric);
            CHECK(fg >= 0.0);
            CHECK(std::fabs(fg - gf) <= 1e-12);
            CHECK(fg <= distance(f, h, metric) + distance(h, g, metric) + 1e-9);
        }
        CHECK(distance(f, f, Metric::L1) == 0.0);
    }
}

TEST_CASE("sup metric interval validation") {
    CHECK_THROWS_AS(distance(uniform01(), uniform01(), Metric::SupOnInterval, 0.4, 0.1), Error);
    CHECK_THROWS_AS(distance(uniform01(), uniform01(), Metric::SupOnInterval, -0.1, 0.5), Error);
    // interval beyond both supports
    CHECK_THROWS_AS(distance(uniform01(), uniform02(), Metric::SupOnInterval, 2.5, 3.0), Error);
    // straddling the end is fine: beyond a support the density is 0
    CHECK(distance(uniform01(), uniform02(), Metric::SupOnInterval, 1.5, 2.5) == doctest::Approx(0.5));
}

TEST_CASE("analytic path: triangular truth against step densities") {
    const ScalarDensity triangular{[](double x) { return x <= 1.0 ? 2.0 * (1.0 - x) : 0.0; }, 1.0};

    // closed forms: L1 = 1/2, h^2 = 1 - (2 sqrt 2)/3, sup over [0.25, 0.75] = 0.5
    CHECK(distance(uniform01(), triangular, Metric::L1) == doctest::Approx(0.5).epsilon(1e-6));
    const double h2 = 1.0 - 2.0 * std::sqrt(2.0) / 3.0;
    CHECK(distance(uniform01(), triangular, Metric::Hellinger) ==
          doctest::Approx(std::sqrt(h2)).epsilon(1e-6));
    CHECK(distance(uniform01(), triangular, Metric::SupOnInterval, 0.25, 0.75) ==
          doctest::Approx(0.5).epsilon(1e-9));
    // whole-interval sup is at the boundary x = 1 where the step stays at 1
    CHECK(distance(uniform01(), triangular, Metric::SupOnInterval, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // KL(f0 || step) for f0 = 2(1-x), step = Uniform[0,1]: log 2 - 1/2
    const auto kl = kl_divergence_analytic(triangular, uniform01());
    CHECK_FALSE(kl.infinite);
    CHECK(kl.kl == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-6));
}

TEST_CASE("analytic path flags infinite kl") {
    const ScalarDensity wide{[](double x) { return x <= 2.0 ? 0.5 : 0.0; }, 2.0};
    const auto kl = kl_divergence_analytic(wide, uniform01());
    CHECK(kl.infinite);
}

} // TEST_SUITE
