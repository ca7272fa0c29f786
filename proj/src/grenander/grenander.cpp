#include "grenander/grenander.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace monodens {

namespace {

struct EcdfPoints {
    std::vector<double> knots;  // unique values
    std::vector<double> values; // cumulative fractions
};

EcdfPoints make_ecdf(const std::vector<double>& sorted) {
    EcdfPoints out;
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue; // tie: jump of multiple 1/n
        out.knots.push_back(sorted[i]);
        out.values.push_back(static_cast<double>(i + 1) / n);
    }
    return out;
}

StepDensity lcm_density(const EcdfPoints& ecdf) {
    // Monotone stack over (0,0) + ECDF points; slopes must strictly
    // decrease along the majorant, collinear points merge.
    std::vector<double> hx = {0.0};
    std::vector<double> hy = {0.0};
    for (std::size_t i = 0; i < ecdf.knots.size(); ++i) {
        const double x = ecdf.knots[i];
        const double y = ecdf.values[i];
        while (hx.size() >= 2) {
            const std::size_t m = hx.size() - 1;
            const double slope_top = (hy[m] - hy[m - 1]) / (hx[m] - hx[m - 1]);
            const double slope_new = (y - hy[m]) / (x - hx[m]);
            if (slope_new >= slope_top) {
                hx.pop_back();
                hy.pop_back();
            } else {
                break;
            }
        }
        hx.push_back(x);
        hy.push_back(y);
    }

    std::vector<double> heights(hx.size() - 1);
    for (std::size_t j = 0; j + 1 < hx.size(); ++j)
        heights[j] = (hy[j + 1] - hy[j]) / (hx[j + 1] - hx[j]);
    return StepDensity(std::move(hx), std::move(heights), ecdf.knots.back());
}

std::vector<double> sorted_positive(std::vector<double> data) {
    require(!data.empty(), errc::invalid_argument, "GrenanderFit: empty sample");
    std::sort(data.begin(), data.end());
    require(data.front() > 0.0, errc::domain_error, "GrenanderFit: data must be positive");
    return data;
}

StepDensity fit_density(const std::vector<double>& sorted, std::vector<double>& knots_out,
                        std::vector<double>& values_out) {
    auto ecdf = make_ecdf(sorted);
    auto density = lcm_density(ecdf);
    knots_out = std::move(ecdf.knots);
    values_out = std::move(ecdf.values);
    return density;
}

} // namespace

GrenanderFit::GrenanderFit(std::vector<double> data)
    : sample_(sorted_positive(std::move(data))),
      ecdf_knots_(),
      ecdf_values_(),
      density_(fit_density(sample_, ecdf_knots_, ecdf_values_)) {}

double boundary_modified_eval(const GrenanderFit& fit, double x, std::size_t n, double eps,
                              double support_bound) {
    require(n >= 2, errc::invalid_argument, "boundary_modified_eval: need n >= 2");
    require(eps > 0.0, errc::invalid_argument, "boundary_modified_eval: eps must be positive");
    require(x >= 0.0 && x <= support_bound, errc::invalid_argument,
            "boundary_modified_eval: x outside [0, support_bound]");
    const double cn = 5.0 * std::cbrt(std::log(static_cast<double>(n))) / eps;
    const double offset = cn * std::pow(static_cast<double>(n), -1.0 / 3.0);
    require(offset < support_bound, errc::degenerate_scale,
            "boundary_modified_eval: c_n n^{-1/3} reaches the support bound; n too small for eps");
    if (x == 0.0) return fit.density().value(offset);
    if (x == support_bound) return fit.density().value(support_bound - offset);
    return fit.density().value(x);
}

double inverse_process(const std::vector<double>& data, double a) {
    require(!data.empty(), errc::invalid_argument, "inverse_process: empty sample");
    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    const auto ecdf = make_ecdf(sorted);

    // objective at candidate t: F_n(t) - a t; smallest maximizer wins ties
    double best_t = 0.0;
    double best_val = 0.0;
    for (std::size_t i = 0; i < ecdf.knots.size(); ++i) {
        const double val = ecdf.values[i] - a * ecdf.knots[i];
        if (val > best_val) {
            best_val = val;
            best_t = ecdf.knots[i];
        }
    }
    return best_t;
}

} // namespace monodens
