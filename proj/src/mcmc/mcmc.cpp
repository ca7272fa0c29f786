#include "mcmc/mcmc.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace monodens {

namespace {

void check_data_domain(const std::vector<double>& data, const BaseMeasure& base) {
    if (base.is_bounded()) {
        const double bound = base.support_bound();
        for (double x : data)
            require(x > 0.0 && x <= bound, errc::domain_error, "datum outside (0, L]");
    } else {
        for (double x : data) require(x > 0.0, errc::domain_error, "datum must be positive");
    }
}

void check_chain_config(const ChainConfig& cfg) {
    require(cfg.iterations > cfg.burn_in, errc::invalid_argument, "chain config: iterations must exceed burn_in");
    require(cfg.thinning >= 1, errc::invalid_argument, "chain config: thinning must be at least 1");
    require((cfg.iterations - cfg.burn_in) >= cfg.thinning, errc::invalid_argument,
            "chain config: no draws survive burn-in and thinning");
}

} // namespace

double conjugate_theta_draw(double cluster_max, std::size_t count, const BaseMeasure& base, Rng& rng) {
    require(cluster_max >= 0.0, errc::invalid_argument, "conjugate_theta_draw: cluster_max must be >= 0");
    require(cluster_max > 0.0 || count == 0, errc::invalid_argument,
            "conjugate_theta_draw: empty cluster_max only valid for count 0");
    const double t = base.t();
    const double a = t - static_cast<double>(count); // exponent of theta in the conditional

    if (base.is_bounded()) {
        const double bound = base.support_bound();
        require(cluster_max <= bound, errc::domain_error, "conjugate_theta_draw: cluster_max exceeds the bound");
        if (cluster_max == bound) return bound;
        const double m = cluster_max;
        const double u = rng.uniform01();
        const double s = a + 1.0;
        if (std::fabs(s) < 1e-12) {
            // logarithmic antiderivative branch (t - count == -1)
            return m * std::exp(u * std::log(bound / m));
        }
        if (m == 0.0) return bound * std::pow(u, 1.0 / s); // s = t + 1 > 0 here
        // CDF(theta) ~ theta^s - m^s on [m, bound], written in overflow-safe
        // relative form theta = m (1 + u ((bound/m)^s - 1))^{1/s}
        const double r = std::exp(s * std::log(bound / m));
        if (std::isinf(r)) return std::max(m, bound * std::pow(u, 1.0 / s));
        return m * std::pow(1.0 + u * (r - 1.0), 1.0 / s);
    }

    const double rate = base.tail_rate();
    const double m = cluster_max;
    if (count == 0 && m <= 0.0) return rng.gamma(t + 1.0, rate);

    const double shape = a + 1.0;
    if (shape > 0.0) {
        if (gamma_q(shape, rate * m) >= 0.05 || m <= std::max(0.0, a) / rate) {
            for (;;) {
                const double theta = rng.gamma(shape, rate);
                if (theta >= m) return theta;
            }
        }
        // far right tail: shifted exponential with the exact tilt
        const double tilt = rate - std::max(0.0, a) / m;
        for (;;) {
            const double theta = m + rng.exponential(tilt);
            const double log_accept = a * std::log(theta / m) - std::max(0.0, a) / m * (theta - m);
            if (std::log(rng.uniform01_open0()) <= log_accept) return theta;
        }
    }

    // shape <= 0: pick whichever of the two exact envelopes is tighter
    if (rate * m >= -shape) {
        for (;;) { // proposal m + Exp(rate), accept (theta/m)^a <= 1
            const double theta = m + rng.exponential(rate);
            if (std::log(rng.uniform01_open0()) <= a * std::log(theta / m)) return theta;
        }
    }
    for (;;) { // power-law proposal theta = m (1-u)^{1/shape}, accept e^{-rate (theta-m)}
        const double theta = m * std::pow(rng.uniform01(), 1.0 / shape);
        if (std::log(rng.uniform01_open0()) <= -rate * (theta - m)) return theta;
    }
}

// ---------------------------------------------------------------------------
// Dirichlet process chain
// ---------------------------------------------------------------------------

DpChain::DpChain(std::vector<double> data, PriorSpec spec, Rng& rng)
    : data_(std::move(data)), spec_(std::move(spec)) {
    require(spec_.kind == PriorKind::DirichletProcess, errc::invalid_argument,
            "DpChain: prior spec is not a Dirichlet process");
    check_data_domain(data_, spec_.base);

    marginal_.resize(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i)
        marginal_[i] = spec_.total_mass * spec_.base.kernel_marginal(data_[i]);

    assignment_.assign(data_.size(), 0);
    if (!data_.empty()) {
        const double max_datum = *std::max_element(data_.begin(), data_.end());
        clusters_.push_back({conjugate_theta_draw(max_datum, data_.size(), spec_.base, rng), data_.size()});
        live_clusters_ = 1;
    }
}

void DpChain::sweep(Rng& rng) {
    std::vector<double> scratch_w;
    std::vector<std::size_t> scratch_slot;

    for (std::size_t i = 0; i < data_.size(); ++i) {
        const double x = data_[i];
        Cluster& old_cluster = clusters_[assignment_[i]];
        if (--old_cluster.count == 0) {
            free_slots_.push_back(assignment_[i]);
            --live_clusters_;
        }

        scratch_w.clear();
        scratch_slot.clear();
        for (std::size_t c = 0; c < clusters_.size(); ++c) {
            const Cluster& cl = clusters_[c];
            if (cl.count == 0 || x > cl.theta) continue;
            scratch_w.push_back(static_cast<double>(cl.count) / cl.theta);
            scratch_slot.push_back(c);
        }
        scratch_w.push_back(marginal_[i]); // open a new table
        const std::size_t pick = rng.categorical(scratch_w);

        if (pick + 1 == scratch_w.size()) {
            const double theta = conjugate_theta_draw(x, 1, spec_.base, rng);
            std::size_t slot;
            if (!free_slots_.empty()) {
                slot = free_slots_.back();
                free_slots_.pop_back();
                clusters_[slot] = {theta, 1};
            } else {
                slot = clusters_.size();
                clusters_.push_back({theta, 1});
            }
            assignment_[i] = slot;
            ++live_clusters_;
        } else {
            const std::size_t slot = scratch_slot[pick];
            ++clusters_[slot].count;
            assignment_[i] = slot;
        }
    }

    // conjugate scale refresh, one pass for the cluster maxima
    std::vector<double> cluster_max(clusters_.size(), 0.0);
    for (std::size_t i = 0; i < data_.size(); ++i)
        cluster_max[assignment_[i]] = std::max(cluster_max[assignment_[i]], data_[i]);
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
        if (clusters_[c].count == 0) continue;
        clusters_[c].theta = conjugate_theta_draw(cluster_max[c], clusters_[c].count, spec_.base, rng);
    }

#ifndef NDEBUG
    check_cluster_invariants();
#endif
}

void DpChain::check_cluster_invariants() const {
    std::vector<double> cluster_max(clusters_.size(), 0.0);
    for (std::size_t i = 0; i < data_.size(); ++i)
        cluster_max[assignment_[i]] = std::max(cluster_max[assignment_[i]], data_[i]);
    for (std::size_t c = 0; c < clusters_.size(); ++c)
        if (clusters_[c].count > 0) assert(clusters_[c].theta >= cluster_max[c]);
}

AtomicMixture DpChain::snapshot(Rng& rng) const {
    const double n = static_cast<double>(data_.size());
    const double total = n + spec_.total_mass;
    std::vector<double> atoms;
    std::vector<double> weights;
    atoms.reserve(live_clusters_ + 1);
    weights.reserve(live_clusters_ + 1);
    for (const Cluster& cl : clusters_) {
        if (cl.count == 0) continue;
        atoms.push_back(cl.theta);
        weights.push_back(static_cast<double>(cl.count) / total);
    }
    atoms.push_back(spec_.base.sample(rng));
    weights.push_back(spec_.total_mass / total);
    return make_sorted_mixture(std::move(atoms), std::move(weights));
}

void DpChain::regenerate_data(Rng& rng) {
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] = clusters_[assignment_[i]].theta * rng.uniform01_open0();
        marginal_[i] = spec_.total_mass * spec_.base.kernel_marginal(data_[i]);
    }
}

// ---------------------------------------------------------------------------
// Finite mixture chain (reversible jump)
// ---------------------------------------------------------------------------

FiniteChain::FiniteChain(std::vector<double> data, PriorSpec spec, Rng& rng)
    : data_(std::move(data)), spec_(std::move(spec)) {
    require(spec_.kind == PriorKind::FiniteMixture, errc::invalid_argument,
            "FiniteChain: prior spec is not a finite mixture");
    check_data_domain(data_, spec_.base);

    const auto q = spec_.k_prior();
    log_q_.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) log_q_[i] = std::log(q[i]);

    const double max_datum = data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
    theta_.push_back(conjugate_theta_draw(max_datum, data_.size(), spec_.base, rng));
    weight_.push_back(1.0);
    loglik_ = loglik(theta_, weight_);
    refresh_density_at_data();
}

void FiniteChain::refresh_density_at_data() {
    density_at_data_.resize(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        double density = 0.0;
        for (std::size_t j = 0; j < theta_.size(); ++j)
            if (data_[i] <= theta_[j]) density += weight_[j] / theta_[j];
        density_at_data_[i] = density;
    }
}

double FiniteChain::loglik(const std::vector<double>& theta, const std::vector<double>& weight) const {
    double total = 0.0;
    for (double x : data_) {
        double density = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j)
            if (x <= theta[j]) density += weight[j] / theta[j];
        if (density <= 0.0) return -std::numeric_limits<double>::infinity();
        total += std::log(density);
    }
    return total;
}

std::size_t FiniteChain::removable_count() const {
    const std::size_t k = theta_.size();
    if (k < 2) return 0;
    if (data_.empty()) return k;
    const double max_datum = *std::max_element(data_.begin(), data_.end());
    std::size_t top = 0;
    for (std::size_t j = 1; j < k; ++j)
        if (theta_[j] > theta_[top]) top = j;
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j)
        if (j != top) second = std::max(second, theta_[j]);
    return (second >= max_datum) ? k : k - 1;
}

void FiniteChain::gibbs_within_model(Rng& rng) {
    const std::size_t k = theta_.size();
    std::vector<std::size_t> counts(k, 0);
    std::vector<double> cluster_max(k, 0.0);

    if (!data_.empty()) {
        std::vector<double> w(k);
        for (double x : data_) {
            for (std::size_t j = 0; j < k; ++j)
                w[j] = (x <= theta_[j]) ? weight_[j] / theta_[j] : 0.0;
            const std::size_t z = rng.categorical(w);
            ++counts[z];
            cluster_max[z] = std::max(cluster_max[z], x);
        }
    }

    // weights | allocations
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        weight_[j] = rng.gamma(spec_.dirichlet_weight + static_cast<double>(counts[j]));
        total += weight_[j];
    }
    for (double& w : weight_) w /= total;

    // scales | allocations
    for (std::size_t j = 0; j < k; ++j)
        theta_[j] = conjugate_theta_draw(cluster_max[j], counts[j], spec_.base, rng);

    loglik_ = loglik(theta_, weight_);
}

void FiniteChain::rj_move(Rng& rng) {
    const std::size_t k = theta_.size();
    const double a = spec_.dirichlet_weight;
    const double x_min = data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
    const double log_mass = std::log(std::max(spec_.base.mass_above(x_min), 1e-300));

    if (rng.uniform01() < 0.5) {
        ++birth_proposed_;
        if (k >= spec_.k_max) return; // Q(K+1) = 0
        const double theta_new = spec_.base.sample_above(x_min, rng);
        const double w = rng.beta(1.0, static_cast<double>(k));

        double ll_new = 0.0;
        if (!data_.empty()) {
            const double kernel_inv = 1.0 / theta_new;
            for (std::size_t i = 0; i < data_.size(); ++i) {
                const double base = (1.0 - w) * density_at_data_[i];
                const double add = (data_[i] <= theta_new) ? w * kernel_inv : 0.0;
                ll_new += std::log(base + add);
            }
        }

        // removable slots after the insertion
        std::size_t removable_new;
        if (data_.empty()) {
            removable_new = k + 1;
        } else {
            const double max_datum = *std::max_element(data_.begin(), data_.end());
            double m1 = theta_new, m2 = -std::numeric_limits<double>::infinity();
            for (double th : theta_) {
                if (th > m1) {
                    m2 = m1;
                    m1 = th;
                } else {
                    m2 = std::max(m2, th);
                }
            }
            removable_new = (m2 >= max_datum) ? k + 1 : k;
        }

        const double kk = static_cast<double>(k);
        double log_ratio = (ll_new - loglik_) + log_q_[k] - log_q_[k - 1] + log_mass;
        log_ratio += std::lgamma((kk + 1.0) * a) - std::lgamma(kk * a) - std::lgamma(a);
        log_ratio += kk * (a - 1.0) * std::log1p(-w) + (a - 1.0) * std::log(w);
        log_ratio += std::log(kk + 1.0) - std::log(kk) - std::log(static_cast<double>(removable_new));

        if (std::log(rng.uniform01_open0()) < log_ratio) {
            ++birth_accepted_;
            for (std::size_t i = 0; i < density_at_data_.size(); ++i) {
                density_at_data_[i] *= (1.0 - w);
                if (data_[i] <= theta_new) density_at_data_[i] += w / theta_new;
            }
            for (double& wj : weight_) wj *= (1.0 - w);
            theta_.push_back(theta_new);
            weight_.push_back(w);
            loglik_ = ll_new;
        }
        return;
    }

    ++death_proposed_;
    const std::size_t removable = removable_count();
    if (removable == 0) return;

    // enumerate removable slots in index order, pick uniformly
    std::vector<std::size_t> slots;
    slots.reserve(k);
    {
        const double max_datum = data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
        std::size_t top = 0;
        for (std::size_t j = 1; j < k; ++j)
            if (theta_[j] > theta_[top]) top = j;
        double second = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j)
            if (j != top) second = std::max(second, theta_[j]);
        for (std::size_t j = 0; j < k; ++j)
            if (j != top || second >= max_datum || data_.empty()) slots.push_back(j);
    }
    const std::size_t victim = slots[std::min(
        static_cast<std::size_t>(rng.uniform01() * static_cast<double>(slots.size())), slots.size() - 1)];
    // the reverse birth draws its scale from the base truncated to
    // [x_min, inf), so a component below x_min cannot be recreated: its
    // death has acceptance zero
    if (theta_[victim] < x_min) return;
    const double w = weight_[victim];
    if (w >= 1.0) return; // single component carrying all mass cannot die

    std::vector<double> theta_new;
    std::vector<double> weight_new;
    theta_new.reserve(k - 1);
    weight_new.reserve(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
        if (j == victim) continue;
        theta_new.push_back(theta_[j]);
        weight_new.push_back(weight_[j] / (1.0 - w));
    }
    const double ll_new = loglik(theta_new, weight_new);

    const double kk = static_cast<double>(k);
    double log_ratio = (ll_new - loglik_) + log_q_[k - 2] - log_q_[k - 1] - log_mass;
    log_ratio -= std::lgamma(kk * a) - std::lgamma((kk - 1.0) * a) - std::lgamma(a);
    log_ratio -= (kk - 1.0) * (a - 1.0) * std::log1p(-w) + (a - 1.0) * std::log(w);
    log_ratio -= std::log(kk) - std::log(kk - 1.0) - std::log(static_cast<double>(slots.size()));

    if (std::log(rng.uniform01_open0()) < log_ratio) {
        ++death_accepted_;
        theta_ = std::move(theta_new);
        weight_ = std::move(weight_new);
        loglik_ = ll_new;
        refresh_density_at_data();
    }
}

void FiniteChain::sweep(Rng& rng) {
    gibbs_within_model(rng);
    refresh_density_at_data();
    rj_move(rng);
}

AtomicMixture FiniteChain::snapshot() const { return make_sorted_mixture(theta_, weight_); }

void FiniteChain::regenerate_data(Rng& rng) {
    // allocation from current weights, then uniform on (0, theta]
    for (double& x : data_) {
        const std::size_t j = rng.categorical(weight_);
        x = theta_[j] * rng.uniform01_open0();
    }
    loglik_ = loglik(theta_, weight_);
    refresh_density_at_data();
}

double FiniteChain::birth_acceptance() const {
    return birth_proposed_ ? static_cast<double>(birth_accepted_) / static_cast<double>(birth_proposed_) : 0.0;
}

double FiniteChain::death_acceptance() const {
    return death_proposed_ ? static_cast<double>(death_accepted_) / static_cast<double>(death_proposed_) : 0.0;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Chain, typename Snapshot>
PosteriorDraws run_chain(Chain& chain, const ChainConfig& cfg, Rng& rng, Snapshot&& snap) {
    PosteriorDraws out;
    out.burn_in = cfg.burn_in;
    out.thinning = cfg.thinning;
    out.seed = cfg.seed;
    for (std::size_t s = 1; s <= cfg.iterations; ++s) {
        chain.sweep(rng);
        if (s > cfg.burn_in && (s - cfg.burn_in) % cfg.thinning == 0) snap(out);
    }
    return out;
}

} // namespace

PosteriorDraws run_dp_posterior(const std::vector<double>& data, const PriorSpec& spec,
                                const ChainConfig& cfg) {
    check_chain_config(cfg);
    Rng rng(cfg.seed);
    DpChain chain(data, spec, rng);
    return run_chain(chain, cfg, rng, [&](PosteriorDraws& out) {
        out.draws.push_back(chain.snapshot(rng));
        out.cluster_count_trace.push_back(chain.cluster_count());
    });
}

PosteriorDraws run_finite_mixture_posterior(const std::vector<double>& data, const PriorSpec& spec,
                                            const ChainConfig& cfg) {
    check_chain_config(cfg);
    Rng rng(cfg.seed);
    FiniteChain chain(data, spec, rng);
    auto out = run_chain(chain, cfg, rng, [&](PosteriorDraws& o) {
        o.draws.push_back(chain.snapshot());
        o.cluster_count_trace.push_back(chain.component_count());
    });
    out.acceptance_rates["birth"] = chain.birth_acceptance();
    out.acceptance_rates["death"] = chain.death_acceptance();
    return out;
}

EssResult effective_sample_size(const std::vector<double>& trace) {
    require(trace.size() >= 10, errc::invalid_argument, "effective_sample_size: need at least 10 points");
    const double n = static_cast<double>(trace.size());
    double mean = 0.0;
    for (double x : trace) mean += x;
    mean /= n;

    auto autocov = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag < trace.size(); ++i)
            acc += (trace[i] - mean) * (trace[i + lag] - mean);
        return acc / n;
    };

    const double gamma0 = autocov(0);
    if (gamma0 <= 0.0 || gamma0 < 1e-15 * mean * mean + 1e-300) return {n, true};

    // Geyer initial positive sequence: sum paired autocovariances while the
    // pair sums stay positive.
    double tau_sum = 0.0;
    for (std::size_t m = 0;; ++m) {
        const std::size_t lag0 = 2 * m;
        const std::size_t lag1 = 2 * m + 1;
        if (lag1 >= trace.size()) break;
        const double pair = autocov(lag0) + autocov(lag1);
        if (pair <= 0.0) break;
        tau_sum += pair;
    }
    const double tau = std::max(1.0, -1.0 + 2.0 * tau_sum / gamma0);
    return {std::min(n, n / tau), false};
}

} // namespace monodens
