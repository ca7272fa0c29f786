#pragma once

#include <vector>

#include "core/mixture.hpp"

namespace monodens {

// Grenander NPMLE of a monotone non-increasing density: the left derivative
// of the least concave majorant of the empirical CDF.
class GrenanderFit {
public:
    // data: positive values, unsorted, ties allowed; must be non-empty.
    explicit GrenanderFit(std::vector<double> data);

    const std::vector<double>& sample() const noexcept { return sample_; } // sorted
    const std::vector<double>& ecdf_knots() const noexcept { return ecdf_knots_; }
    const std::vector<double>& ecdf_values() const noexcept { return ecdf_values_; }
    const StepDensity& density() const noexcept { return density_; }
    std::size_t sample_size() const noexcept { return sample_.size(); }

    // f_hat_n(0+): the first majorant slope, the quantity known to be
    // inconsistent for f0(0+).
    double value_at_zero() const noexcept { return density_.value_at_zero(); }

private:
    std::vector<double> sample_;
    std::vector<double> ecdf_knots_;  // unique sorted values
    std::vector<double> ecdf_values_; // cumulative fractions at the knots
    StepDensity density_;
};

// Boundary-corrected evaluation: on [0, support_bound], returns
// f_hat(c_n n^{-1/3}) at x = 0, f_hat(support_bound - c_n n^{-1/3}) at
// x = support_bound and f_hat(x) in between, with c_n = 5 (log n)^{1/3} / eps.
// Fails with degenerate_scale when c_n n^{-1/3} >= support_bound.
double boundary_modified_eval(const GrenanderFit& fit, double x, std::size_t n, double eps,
                              double support_bound);

// Inverse process U_n(a): the smallest maximizer of F_n(t) - a t over
// t in [0, max sample]; the objective only peaks at 0 or at data points.
double inverse_process(const std::vector<double>& data, double a);

} // namespace monodens
