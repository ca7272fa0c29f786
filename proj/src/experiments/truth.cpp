#include "experiments/truth.hpp"

#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace monodens {

TruthFamily TrueDensity::family_from_name(const std::string& name) {
    if (name == "uniform") return TruthFamily::Uniform;
    if (name == "triangular") return TruthFamily::Triangular;
    if (name == "truncated_exponential") return TruthFamily::TruncatedExponential;
    if (name == "exponential") return TruthFamily::Exponential;
    fail(errc::config_error, "unknown truth family '" + name + "'");
}

TrueDensity::TrueDensity(TruthFamily family, const std::vector<double>& params, double beta, double tau)
    : family_(family), beta_(beta), tau_(tau) {
    switch (family_) {
    case TruthFamily::Uniform:
        require(params.size() == 1 && params[0] > 0.0, errc::config_error, "uniform: params = {L > 0}");
        length_ = params[0];
        support_ = length_;
        name_ = "uniform";
        break;
    case TruthFamily::Triangular:
        require(params.size() == 1 && params[0] > 0.0, errc::config_error, "triangular: params = {L > 0}");
        length_ = params[0];
        support_ = length_;
        name_ = "triangular";
        break;
    case TruthFamily::TruncatedExponential:
        require(params.size() == 2 && params[0] > 0.0 && params[1] > 0.0, errc::config_error,
                "truncated_exponential: params = {lambda > 0, L > 0}");
        lambda_ = params[0];
        length_ = params[1];
        support_ = length_;
        name_ = "truncated_exponential";
        break;
    case TruthFamily::Exponential:
        require(params.size() == 1 && params[0] > 0.0, errc::config_error, "exponential: params = {lambda > 0}");
        lambda_ = params[0];
        name_ = "exponential";
        require(beta_ > 0.0 && tau_ > 0.0, errc::config_error,
                "exponential: tail envelope beta, tau must be positive");
        // lambda e^{-lambda x} <= e^{-beta x^tau} for large x: any tau < 1
        // works; tau = 1 needs beta < lambda
        require(tau_ < 1.0 || (tau_ == 1.0 && beta_ < lambda_), errc::config_error,
                "exponential: tail envelope requires tau < 1, or tau = 1 with beta < lambda");
        // integration cutoff at the 1 - 1e-8 quantile
        support_ = -std::log(1e-8) / lambda_;
        break;
    }
    if (family_ != TruthFamily::Exponential)
        require(beta == 0.0 && tau == 0.0, errc::config_error,
                "beta/tau only apply to the exponential family");
}

double TrueDensity::value(double x) const {
    if (x < 0.0) return 0.0;
    switch (family_) {
    case TruthFamily::Uniform: return x <= length_ ? 1.0 / length_ : 0.0;
    case TruthFamily::Triangular: return x <= length_ ? 2.0 * (length_ - x) / (length_ * length_) : 0.0;
    case TruthFamily::TruncatedExponential:
        return x <= length_ ? lambda_ * std::exp(-lambda_ * x) / (1.0 - std::exp(-lambda_ * length_)) : 0.0;
    case TruthFamily::Exponential: return lambda_ * std::exp(-lambda_ * x);
    }
    return 0.0;
}

double TrueDensity::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    switch (family_) {
    case TruthFamily::Uniform: return x >= length_ ? 1.0 : x / length_;
    case TruthFamily::Triangular: {
        if (x >= length_) return 1.0;
        const double z = x / length_;
        return z * (2.0 - z);
    }
    case TruthFamily::TruncatedExponential:
        if (x >= length_) return 1.0;
        return -std::expm1(-lambda_ * x) / -std::expm1(-lambda_ * length_);
    case TruthFamily::Exponential: return -std::expm1(-lambda_ * x);
    }
    return 0.0;
}

double TrueDensity::quantile(double u) const {
    switch (family_) {
    case TruthFamily::Uniform: return length_ * u;
    case TruthFamily::Triangular: return length_ * (1.0 - std::sqrt(1.0 - u));
    case TruthFamily::TruncatedExponential:
        return -std::log1p(u * std::expm1(-lambda_ * length_)) / lambda_;
    case TruthFamily::Exponential: return -std::log1p(-u) / lambda_;
    }
    return 0.0;
}

std::vector<double> TrueDensity::sample(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<double> out(n);
    // quantile of u in (0, 1) keeps every datum strictly inside the support
    for (auto& x : out) {
        double u;
        do {
            u = rng.uniform01();
        } while (u == 0.0);
        x = quantile(u);
        if (x <= 0.0) x = std::numeric_limits<double>::min();
    }
    return out;
}

ScalarDensity TrueDensity::as_scalar_density() const {
    return ScalarDensity{[*this](double x) { return value(x); }, support_};
}

} // namespace monodens
