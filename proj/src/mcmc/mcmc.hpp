#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/mixture.hpp"
#include "core/rng.hpp"
#include "priors/priors.hpp"

namespace monodens {

struct ChainConfig {
    std::size_t iterations = 5000;
    std::size_t burn_in = 1000;
    std::size_t thinning = 2;
    std::uint64_t seed = 0;
};

struct PosteriorDraws {
    std::vector<AtomicMixture> draws;
    std::size_t burn_in = 0;
    std::size_t thinning = 1;
    std::uint64_t seed = 0;
    std::vector<std::size_t> cluster_count_trace;     // per kept draw
    std::map<std::string, double> acceptance_rates;   // finite mixture moves
};

// Full conditional of a cluster scale under the uniform kernel: density
// proportional to alpha(theta) theta^{-count} for theta >= cluster_max.
// Exact inverse-CDF on a bounded base (with the logarithmic branch at
// t - count = -1); exact rejection on the exponential-tilt base.
double conjugate_theta_draw(double cluster_max, std::size_t count, const BaseMeasure& base, Rng& rng);

// Marginal Chinese-restaurant Gibbs sampler for the Dirichlet process prior.
// Exposed as a class so the joint-distribution test can alternate
// data-regeneration and sweeps on a live chain.
class DpChain {
public:
    DpChain(std::vector<double> data, PriorSpec spec, Rng& rng);

    void sweep(Rng& rng);
    std::size_t cluster_count() const noexcept { return live_clusters_; }

    // Snapshot: cluster scales weighted n_c/(n+A) plus one fresh base draw
    // carrying the A/(n+A) remainder.
    AtomicMixture snapshot(Rng& rng) const;

    // Swap in a freshly generated dataset keeping the clustering sizes;
    // used by the prior-reproduction (successive-conditional) test.
    void regenerate_data(Rng& rng);

    const std::vector<double>& data() const noexcept { return data_; }

private:
    struct Cluster {
        double theta = 0.0;
        std::size_t count = 0;
    };

    void check_cluster_invariants() const;

    std::vector<double> data_;
    std::vector<double> marginal_; // A * kernel_marginal(x_i), fixed per dataset
    PriorSpec spec_;
    std::vector<Cluster> clusters_;
    std::vector<std::size_t> assignment_;
    std::vector<std::size_t> free_slots_;
    std::size_t live_clusters_ = 0;
};

// Finite-mixture sampler: within-model Gibbs through temporary allocations
// plus a reversible-jump birth/death pair on the component count.
class FiniteChain {
public:
    FiniteChain(std::vector<double> data, PriorSpec spec, Rng& rng);

    void sweep(Rng& rng);
    std::size_t component_count() const noexcept { return theta_.size(); }
    AtomicMixture snapshot() const;
    void regenerate_data(Rng& rng);
    double birth_acceptance() const;
    double death_acceptance() const;

    const std::vector<double>& data() const noexcept { return data_; }

private:
    void gibbs_within_model(Rng& rng);
    void rj_move(Rng& rng);
    void refresh_density_at_data();
    double loglik(const std::vector<double>& theta, const std::vector<double>& weight) const;
    std::size_t removable_count() const;

    std::vector<double> data_;
    PriorSpec spec_;
    std::vector<double> log_q_; // log Q(K), K = 1..k_max
    std::vector<double> theta_;
    std::vector<double> weight_;
    std::vector<double> density_at_data_; // current mixture density at each datum
    double loglik_ = 0.0;
    std::size_t birth_proposed_ = 0, birth_accepted_ = 0;
    std::size_t death_proposed_ = 0, death_accepted_ = 0;
};

PosteriorDraws run_dp_posterior(const std::vector<double>& data, const PriorSpec& spec,
                                const ChainConfig& cfg);

PosteriorDraws run_finite_mixture_posterior(const std::vector<double>& data, const PriorSpec& spec,
                                            const ChainConfig& cfg);

struct EssResult {
    double ess = 0.0;
    bool degenerate = false; // constant trace
};

// Effective sample size by Geyer's initial-positive-sequence estimator.
EssResult effective_sample_size(const std::vector<double>& trace);

} // namespace monodens
