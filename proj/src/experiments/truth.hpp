#pragma once

#include <string>
#include <vector>

#include "core/distance.hpp"
#include "core/rng.hpp"

namespace monodens {

enum class TruthFamily { Uniform, Triangular, TruncatedExponential, Exponential };

// Data-generating density for the simulation scenarios. All families are
// monotone non-increasing with closed-form CDF and quantile.
class TrueDensity {
public:
    // uniform / triangular on [0, L]: params = {L}
    // truncated_exponential on [0, L]: params = {lambda, L}
    // exponential on R+: params = {lambda}; beta, tau declare the tail
    // envelope f0(x) <= exp(-beta x^tau) checked analytically here.
    TrueDensity(TruthFamily family, const std::vector<double>& params, double beta = 0.0,
                double tau = 0.0);

    TruthFamily family() const noexcept { return family_; }
    const std::string& name() const noexcept { return name_; }
    bool unbounded() const noexcept { return family_ == TruthFamily::Exponential; }
    double support_bound() const noexcept { return support_; } // +inf quantile cutoff for R+
    double beta() const noexcept { return beta_; }
    double tau() const noexcept { return tau_; }

    double value(double x) const;
    double cdf(double x) const;
    double quantile(double u) const;

    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    // Adapter for the quadrature distance path. For the R+ family, the
    // integration domain is cut at the 1 - 1e-8 quantile.
    ScalarDensity as_scalar_density() const;

    static TruthFamily family_from_name(const std::string& name);

private:
    TruthFamily family_;
    std::string name_;
    double lambda_ = 0.0;
    double length_ = 0.0;  // L for the bounded families
    double support_ = 0.0; // integration end (quantile cutoff when unbounded)
    double beta_ = 0.0;
    double tau_ = 0.0;
};

} // namespace monodens
