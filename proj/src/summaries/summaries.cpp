#include "summaries/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace monodens {

namespace {

const char* metric_name(Metric metric) {
    switch (metric) {
    case Metric::L1: return "L1";
    case Metric::Hellinger: return "hellinger";
    case Metric::SupOnInterval: return "sup";
    }
    return "?";
}

// order statistic by 1-based rank ceil(q * n), clamped to [1, n]
double quantile_by_rank(std::vector<double> sorted, double q) {
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-12));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

} // namespace

LossSample compute_loss_sample(const PosteriorDraws& draws, const ReferenceDensity& reference,
                               Metric metric, double a, double b) {
    require(!draws.draws.empty(), errc::invalid_argument, "compute_loss_sample: no draws");
    LossSample out;
    out.metric = metric_name(metric);
    out.distances.reserve(draws.draws.size());
    for (const auto& mixture : draws.draws) {
        const StepDensity step = mixture.to_step_density();
        const double d = std::visit(
            [&](const auto& ref) { return distance(step, ref, metric, a, b); }, reference);
        out.distances.push_back(d);
    }
    return out;
}

LossSample compute_pointwise_loss(const PosteriorDraws& draws, double x, double reference_value) {
    require(!draws.draws.empty(), errc::invalid_argument, "compute_pointwise_loss: no draws");
    LossSample out;
    out.metric = "pointwise";
    out.distances.reserve(draws.draws.size());
    for (const auto& mixture : draws.draws)
        out.distances.push_back(std::fabs(mixture.density(x) - reference_value));
    return out;
}

double posterior_median_pointwise(const PosteriorDraws& draws, double x) {
    require(!draws.draws.empty(), errc::invalid_argument, "posterior_median_pointwise: no draws");
    std::vector<double> values;
    values.reserve(draws.draws.size());
    for (const auto& mixture : draws.draws) values.push_back(mixture.density(x));
    std::sort(values.begin(), values.end());
    // inf{t : fraction(values <= t) > 1/2}; the strict inequality lands on
    // the (floor(n/2) + 1)-th order statistic
    return values[values.size() / 2];
}

double radius_at_mass(const LossSample& losses, double mass) {
    require(mass > 0.0 && mass <= 1.0, errc::invalid_argument, "radius_at_mass: mass must be in (0, 1]");
    std::vector<double> sorted = losses.distances;
    std::sort(sorted.begin(), sorted.end());
    require(std::isfinite(sorted.front()), errc::runtime_error,
            "radius_at_mass: every draw is at infinite distance");
    return quantile_by_rank(std::move(sorted), mass);
}

double posterior_radius(const PosteriorDraws& draws, const ReferenceDensity& reference, Metric metric,
                        double mass, double a, double b) {
    return radius_at_mass(compute_loss_sample(draws, reference, metric, a, b), mass);
}

Band credible_band(const PosteriorDraws& draws, const std::vector<double>& grid, double level) {
    require(!draws.draws.empty(), errc::invalid_argument, "credible_band: no draws");
    require(level >= 0.0 && level < 1.0, errc::invalid_argument, "credible_band: level must be in [0, 1)");
    Band band;
    band.lower.reserve(grid.size());
    band.upper.reserve(grid.size());
    std::vector<double> values(draws.draws.size());
    for (double x : grid) {
        for (std::size_t d = 0; d < draws.draws.size(); ++d) values[d] = draws.draws[d].density(x);
        std::sort(values.begin(), values.end());
        band.lower.push_back(quantile_by_rank(values, (1.0 - level) / 2.0));
        band.upper.push_back(quantile_by_rank(values, 1.0 - (1.0 - level) / 2.0));
    }
    return band;
}

std::vector<double> posterior_mean_curve(const PosteriorDraws& draws, const std::vector<double>& grid) {
    require(!draws.draws.empty(), errc::invalid_argument, "posterior_mean_curve: no draws");
    std::vector<double> mean(grid.size(), 0.0);
    for (const auto& mixture : draws.draws)
        for (std::size_t g = 0; g < grid.size(); ++g) mean[g] += mixture.density(grid[g]);
    for (double& m : mean) m /= static_cast<double>(draws.draws.size());
    return mean;
}

} // namespace monodens
