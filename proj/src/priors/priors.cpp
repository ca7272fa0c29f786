#include "priors/priors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace monodens {

BaseMeasure::BaseMeasure(double t, std::optional<double> bound, double tail_rate)
    : t_(t), support_bound_(bound), tail_rate_(tail_rate) {
    // integrability near 0 needs t > -1; the contraction-rate condition
    // t > 1 is the validator's business, not a construction constraint
    require(t > 0.0, errc::invalid_argument, "BaseMeasure: t must be positive");
    if (support_bound_)
        require(*support_bound_ > 0.0, errc::invalid_argument, "BaseMeasure: support bound must be positive");
    else
        require(tail_rate > 0.0, errc::invalid_argument, "BaseMeasure: tail rate must be positive");
}

BaseMeasure BaseMeasure::bounded(double t, double support_bound) {
    return BaseMeasure(t, support_bound, 0.0);
}

BaseMeasure BaseMeasure::unbounded(double t, double tail_rate) {
    return BaseMeasure(t, std::nullopt, tail_rate);
}

double BaseMeasure::support_bound() const {
    require(support_bound_.has_value(), errc::invalid_argument, "BaseMeasure: no finite support bound");
    return *support_bound_;
}

double BaseMeasure::density(double theta) const {
    if (theta <= 0.0) return 0.0;
    if (support_bound_) {
        if (theta > *support_bound_) return 0.0;
        return (t_ + 1.0) * std::pow(theta, t_) / std::pow(*support_bound_, t_ + 1.0);
    }
    // Gamma(t+1, rate) density
    return std::exp((t_ + 1.0) * std::log(tail_rate_) + t_ * std::log(theta) - tail_rate_ * theta -
                    std::lgamma(t_ + 1.0));
}

double BaseMeasure::cdf(double theta) const {
    if (theta <= 0.0) return 0.0;
    if (support_bound_) return theta >= *support_bound_ ? 1.0 : std::pow(theta / *support_bound_, t_ + 1.0);
    return gamma_p(t_ + 1.0, tail_rate_ * theta);
}

double BaseMeasure::kernel_marginal(double x) const {
    require(x >= 0.0, errc::invalid_argument, "kernel_marginal: x must be non-negative");
    if (support_bound_) {
        const double bound = *support_bound_;
        if (x >= bound) return 0.0;
        return (t_ + 1.0) * (std::pow(bound, t_) - std::pow(x, t_)) / (t_ * std::pow(bound, t_ + 1.0));
    }
    return tail_rate_ * gamma_q(t_, tail_rate_ * x) / t_;
}

double BaseMeasure::mean() const {
    if (support_bound_) return (t_ + 1.0) / (t_ + 2.0) * *support_bound_;
    return (t_ + 1.0) / tail_rate_;
}

double BaseMeasure::sample(Rng& rng) const {
    if (support_bound_) return *support_bound_ * std::pow(rng.uniform01_open0(), 1.0 / (t_ + 1.0));
    return rng.gamma(t_ + 1.0, tail_rate_);
}

double BaseMeasure::sample_above(double lower, Rng& rng) const {
    if (lower <= 0.0) return sample(rng);
    if (support_bound_) {
        const double bound = *support_bound_;
        require(lower < bound, errc::invalid_argument, "sample_above: lower bound reaches the support bound");
        // inverse CDF on [lower, bound]
        const double lo_pow = std::pow(lower, t_ + 1.0);
        const double hi_pow = std::pow(bound, t_ + 1.0);
        return std::pow(lo_pow + rng.uniform01() * (hi_pow - lo_pow), 1.0 / (t_ + 1.0));
    }
    // Rejection against the untruncated gamma while the tail holds decent
    // mass; deep in the tail (past the mode t/rate) switch to a tilted
    // exponential proposal with exact acceptance ratio.
    const double tail = gamma_q(t_ + 1.0, tail_rate_ * lower);
    if (tail >= 0.05 || lower <= t_ / tail_rate_) {
        for (;;) {
            const double theta = rng.gamma(t_ + 1.0, tail_rate_);
            if (theta >= lower) return theta;
        }
    }
    const double proposal_rate = tail_rate_ - t_ / lower; // positive past the mode
    for (;;) {
        const double theta = lower + rng.exponential(proposal_rate);
        // accept with probability (theta/lower)^t e^{-(t/lower)(theta - lower)} <= 1
        if (std::log(rng.uniform01_open0()) <=
            t_ * std::log(theta / lower) - (t_ / lower) * (theta - lower))
            return theta;
    }
}

PriorSpec PriorSpec::dirichlet_process(BaseMeasure base, double total_mass) {
    require(total_mass > 0.0, errc::invalid_argument, "PriorSpec: DP total mass must be positive");
    PriorSpec spec{PriorKind::DirichletProcess, std::move(base), total_mass};
    return spec;
}

PriorSpec PriorSpec::finite_mixture(BaseMeasure base, std::size_t k_max, double dirichlet_weight) {
    require(k_max >= 1, errc::invalid_argument, "PriorSpec: k_max must be at least 1");
    require(dirichlet_weight > 0.0, errc::invalid_argument, "PriorSpec: Dirichlet weight must be positive");
    PriorSpec spec{PriorKind::FiniteMixture, std::move(base), 1.0, k_max, dirichlet_weight};
    return spec;
}

std::vector<double> PriorSpec::k_prior() const {
    std::vector<double> q(k_max);
    double total = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double kk = static_cast<double>(k);
        q[k - 1] = std::exp(-kk * std::log(kk));
        total += q[k - 1];
    }
    for (double& v : q) v /= total;
    return q;
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.pass; });
}

ValidationReport validate_prior_conditions(const PriorSpec& spec) {
    ValidationReport report;

    {
        ConditionCheck check;
        check.id = "base_tail_exponent";
        check.pass = spec.base.t() > 1.0;
        std::ostringstream os;
        os << "alpha(theta)/theta^t stays bounded near 0 for the built-in family; t = " << spec.base.t()
           << (check.pass ? " > 1" : " fails t > 1");
        check.details = os.str();
        report.checks.push_back(std::move(check));
    }

    if (spec.kind == PriorKind::FiniteMixture) {
        // numeric sandwich fit of -log Q(K) / (K log K) over 2 <= K <= k_max
        const auto q = spec.k_prior();
        double c1 = std::numeric_limits<double>::infinity();
        double c2 = 0.0;
        for (std::size_t k = 2; k <= spec.k_max; ++k) {
            const double kk = static_cast<double>(k);
            const double ratio = -std::log(q[k - 1]) / (kk * std::log(kk));
            c1 = std::min(c1, ratio);
            c2 = std::max(c2, ratio);
        }
        ConditionCheck check;
        check.id = "k_prior_sandwich";
        check.pass = spec.k_max >= 2 && c1 > 0.0 && c1 <= c2;
        std::ostringstream os;
        os << "fitted C1 = " << c1 << ", C2 = " << c2;
        check.details = os.str();
        report.checks.push_back(std::move(check));

        ConditionCheck dir;
        dir.id = "dirichlet_lower_bound";
        dir.pass = spec.dirichlet_weight > 0.0;
        const double a = spec.dirichlet_weight;
        // density constant Gamma(Ka)/Gamma(a)^K at K = 2 gives a witness c
        const double log_c2const = std::lgamma(2.0 * a) - 2.0 * std::lgamma(a);
        std::ostringstream osd;
        osd << "symmetric Dirichlet(a = " << a << ") dominates K^{-K} c^K prod p_i^{a_i}; witness c at K=2: "
            << 2.0 * std::exp(0.5 * log_c2const);
        dir.details = osd.str();
        report.checks.push_back(std::move(dir));
    }

    return report;
}

AtomicMixture sample_prior(const PriorSpec& spec, std::size_t truncation, std::uint64_t seed) {
    Rng rng(seed);
    if (spec.kind == PriorKind::DirichletProcess) {
        require(truncation >= 1, errc::invalid_argument, "sample_prior: truncation must be at least 1");
        std::vector<double> atoms(truncation);
        std::vector<double> weights(truncation);
        double remaining = 1.0;
        for (std::size_t j = 0; j < truncation; ++j) {
            atoms[j] = spec.base.sample(rng);
            if (j + 1 == truncation) {
                weights[j] = remaining; // fold the tail into the last stick
            } else {
                const double v = rng.beta(1.0, spec.total_mass);
                weights[j] = v * remaining;
                remaining *= (1.0 - v);
            }
        }
        return make_sorted_mixture(std::move(atoms), std::move(weights));
    }

    const auto q = spec.k_prior();
    const std::size_t k = rng.categorical(q) + 1;
    std::vector<double> atoms(k);
    for (auto& a : atoms) a = spec.base.sample(rng);
    auto weights = rng.dirichlet(k, spec.dirichlet_weight);
    return make_sorted_mixture(std::move(atoms), std::move(weights));
}

} // namespace monodens
