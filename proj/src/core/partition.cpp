#include "core/partition.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace monodens {

double PartitionTrace::piece_bound(double target_eps, double support, double sup_bound) const {
    return constant_K0 * std::pow(sup_bound, 2.0 / 3.0) * std::cbrt(support) / target_eps;
}

std::pair<AtomicMixture, PartitionTrace>
adaptive_kl_partition(const std::function<double(double)>& f, double eps, double support,
                      double sup_bound) {
    require(eps > 0.0 && eps < 1.0, errc::invalid_argument, "adaptive_kl_partition: eps must be in (0,1)");
    require(support > 0.0, errc::invalid_argument, "adaptive_kl_partition: support must be positive");
    require(f(0.0) <= sup_bound, errc::bound_violation, "adaptive_kl_partition: f(0) exceeds the declared bound");

    // Monotonicity spot check on a 2^16-point grid; a runtime proof is not
    // possible for a black-box density.
    {
        const std::size_t grid = 1u << 16;
        double prev = f(0.0);
        for (std::size_t i = 1; i <= grid; ++i) {
            const double x = support * static_cast<double>(i) / static_cast<double>(grid);
            const double fx = f(x);
            require(fx <= prev + 1e-9 * std::max(1.0, prev), errc::shape_violation,
                    "adaptive_kl_partition: f is not non-increasing on the check grid");
            prev = fx;
        }
    }

    const auto root = [&](double x) { return std::sqrt(std::max(f(x), 0.0)); };

    std::vector<double> pts = {0.0, support};
    PartitionTrace trace;
    trace.constant_K0 = kPartitionK0;

    const double stop = eps * eps * eps; // first k with eps_k^2 <= eps^3
    for (;;) {
        double worst = 0.0;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const double inc = (root(pts[j]) - root(pts[j + 1])) * std::sqrt(pts[j + 1] - pts[j]);
            worst = std::max(worst, inc);
        }
        trace.epsilon_history.push_back(worst);
        trace.final_epsilon = worst;
        if (worst * worst <= stop) break;

        const double threshold = worst / std::sqrt(2.0);
        std::vector<double> refined;
        refined.reserve(2 * pts.size());
        refined.push_back(pts.front());
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const double inc = (root(pts[j]) - root(pts[j + 1])) * std::sqrt(pts[j + 1] - pts[j]);
            if (inc >= threshold) refined.push_back(0.5 * (pts[j] + pts[j + 1]));
            refined.push_back(pts[j + 1]);
        }
        pts = std::move(refined);
        ++trace.steps;
    }

    trace.breakpoints = pts;
    trace.piece_count = pts.size() - 1;

    // Left-endpoint heights of f on each piece, renormalized to a density.
    std::vector<double> heights(trace.piece_count);
    double mass = 0.0;
    for (std::size_t j = 0; j < trace.piece_count; ++j) {
        heights[j] = std::max(f(pts[j]), 0.0);
        mass += heights[j] * (pts[j + 1] - pts[j]);
    }
    require(mass > 0.0, errc::invalid_argument, "adaptive_kl_partition: f integrates to zero");
    for (double& h : heights) h /= mass;
    // left-endpoint evaluation of a non-increasing f keeps heights sorted;
    // clip fp noise so the StepDensity constructor sees a clean shape
    for (std::size_t j = 1; j < heights.size(); ++j) heights[j] = std::min(heights[j], heights[j - 1]);

    StepDensity step(pts, std::move(heights), support);
    return {step.to_mixture(), std::move(trace)};
}

} // namespace monodens
