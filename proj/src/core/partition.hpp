#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "core/mixture.hpp"

namespace monodens {

// Record of the adaptive bisection run: the final breakpoints, the
// per-step split thresholds, and the stopping data.
struct PartitionTrace {
    std::vector<double> breakpoints;      // final partition 0 = x0 < ... < x_{nk}
    std::size_t piece_count = 0;          // n_k
    std::size_t steps = 0;                // k
    double final_epsilon = 0.0;           // eps_k (computed on sqrt(f))
    std::vector<double> epsilon_history;  // eps_0 ... eps_k
    double constant_K0 = 0.0;             // 2 (1 - 2^{-2/3})^{-2}

    // Guaranteed ceiling on piece_count for the requested accuracy.
    double piece_bound(double target_eps, double support, double sup_bound) const;
};

inline constexpr double kPartitionK0 = 14.605926778920082; // 2 (1 - 2^{-2/3})^{-2}

// Builds an atomic mixing distribution whose uniform mixture approximates a
// monotone non-increasing density f on [0, support] to KL order eps^2.
//
// The bisection refines wherever the increment of sqrt(f) times the root
// piece width is within 1/sqrt(2) of the worst piece, and stops at the
// first step whose worst increment eps_k satisfies eps_k^2 <= eps^3. The
// step heights are the left-endpoint values of f, renormalized.
//
// f must satisfy f(0) <= sup_bound and be non-increasing (spot-checked on a
// 2^16-point grid); eps must lie in (0, 1).
std::pair<AtomicMixture, PartitionTrace>
adaptive_kl_partition(const std::function<double(double)>& f, double eps, double support,
                      double sup_bound);

} // namespace monodens
