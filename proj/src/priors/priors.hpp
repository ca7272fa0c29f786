#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/mixture.hpp"
#include "core/rng.hpp"

namespace monodens {

// Base measure on kernel scales: density proportional to theta^t on (0, L],
// or theta^t exp(-tail_rate * theta) on (0, inf) when no bound is declared.
class BaseMeasure {
public:
    static BaseMeasure bounded(double t, double support_bound);
    static BaseMeasure unbounded(double t, double tail_rate);

    double t() const noexcept { return t_; }
    bool is_bounded() const noexcept { return support_bound_.has_value(); }
    double support_bound() const; // throws for the unbounded family
    double tail_rate() const noexcept { return tail_rate_; }

    double density(double theta) const;
    double cdf(double theta) const;
    double mass_above(double theta) const { return 1.0 - cdf(theta); }

    // Mixture-kernel marginal: integral of alpha(theta)/theta over theta >= x.
    double kernel_marginal(double x) const;

    double mean() const;
    double sample(Rng& rng) const;
    // Draw conditional on theta >= lower.
    double sample_above(double lower, Rng& rng) const;

private:
    BaseMeasure(double t, std::optional<double> bound, double tail_rate);

    double t_;
    std::optional<double> support_bound_;
    double tail_rate_ = 0.0;
};

enum class PriorKind { DirichletProcess, FiniteMixture };

struct PriorSpec {
    PriorKind kind = PriorKind::DirichletProcess;
    BaseMeasure base;
    double total_mass = 1.0;       // DP total mass A
    std::size_t k_max = 200;       // cutoff of the component-count prior
    double dirichlet_weight = 1.0; // symmetric Dirichlet parameter a

    static PriorSpec dirichlet_process(BaseMeasure base, double total_mass);
    static PriorSpec finite_mixture(BaseMeasure base, std::size_t k_max = 200,
                                    double dirichlet_weight = 1.0);

    // Normalized component-count prior Q(K) proportional to exp(-K log K),
    // K = 1..k_max; Q(1) is the exp(0) = 1 term.
    std::vector<double> k_prior() const;
};

struct ConditionCheck {
    std::string id;
    bool pass = false;
    std::string details;
};

struct ValidationReport {
    std::vector<ConditionCheck> checks;
    bool all_pass() const;
};

// One pass/fail entry per contraction-rate prior condition: the base-measure
// tail exponent, the K-prior sandwich e^{-C1 K log K} >= Q(K) >= e^{-C2 K log K}
// (numeric fit over 2 <= K <= k_max), and the Dirichlet lower bound.
ValidationReport validate_prior_conditions(const PriorSpec& spec);

// Prior draw of the mixing distribution. Type 1 uses stick breaking cut at
// `truncation` atoms with the remainder folded into the last stick; Type 2
// draws K from Q, atoms i.i.d. from the base (sorted) and Dirichlet weights.
AtomicMixture sample_prior(const PriorSpec& spec, std::size_t truncation, std::uint64_t seed);

} // namespace monodens
