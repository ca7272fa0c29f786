#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/rng.hpp"

namespace monodens {

class StepDensity;

// Finite atomic mixing distribution P = sum_i weight_i * delta(atom_i).
// The mixed density is f_P(x) = sum_i weight_i * 1[x <= atom_i] / atom_i,
// a right-continuous non-increasing step density.
class AtomicMixture {
public:
    // atoms must be strictly increasing and positive; weights non-negative
    // and summing to 1 within 1e-12.
    AtomicMixture(std::vector<double> atoms, std::vector<double> weights);

    const std::vector<double>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double max_atom() const noexcept { return atoms_.back(); }

    // f_P(x); 0 beyond the largest atom. Requires x >= 0.
    double density(double x) const;

    // Exact step-density form of f_P on (0, max_atom].
    StepDensity to_step_density() const;

    // Checks atoms <= bound (used when the prior declares a support bound).
    void check_support_bound(double bound) const;

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

// Right-closed piecewise-constant non-increasing density: value heights[j]
// on (knots[j], knots[j+1]], with knots[0] = 0. f(0) is defined by right
// continuity as heights[0].
class StepDensity {
public:
    // knots: 0 = u0 < u1 < ... < ur; heights: h1 >= ... >= hr >= 0 (one per
    // piece) integrating to 1 within 1e-10.
    StepDensity(std::vector<double> knots, std::vector<double> heights,
                std::optional<double> support_bound = std::nullopt);

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& heights() const noexcept { return heights_; }
    std::size_t piece_count() const noexcept { return heights_.size(); }
    double end() const noexcept { return knots_.back(); }
    const std::optional<double>& support_bound() const noexcept { return support_bound_; }

    double value(double x) const;
    double value_at_zero() const noexcept { return heights_.front(); }
    double integral() const;

    // Inverse Williamson map: the atomic mixing distribution whose mixture
    // of uniforms is exactly this density. Pieces of equal height merge
    // into a single atom.
    AtomicMixture to_mixture() const;

private:
    std::vector<double> knots_;
    std::vector<double> heights_;
    std::optional<double> support_bound_;
};

// n i.i.d. draws from f_P via the two-stage scheme: atom by weight, then
// uniform on (0, atom]. Identical seed gives an identical sequence.
std::vector<double> sample_iid(const AtomicMixture& mixture, std::size_t n, std::uint64_t seed);

// Sorts (atom, weight) pairs by atom, merges exact ties and renormalizes.
AtomicMixture make_sorted_mixture(std::vector<double> atoms, std::vector<double> weights);

} // namespace monodens
