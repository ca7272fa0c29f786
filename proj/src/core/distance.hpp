#pragma once

#include <functional>
#include <vector>

#include "core/mixture.hpp"

namespace monodens {

enum class Metric { L1, Hellinger, SupOnInterval };

struct KlResult {
    double kl = 0.0;            // +inf when f has mass where g vanishes
    double second_moment = 0.0; // integral of f * log(f/g)^2
    bool infinite = false;
};

// Exact piecewise integration over the merged knot set; no quadrature error
// for step-step pairs. The sup metric needs the interval [a, b].
double distance(const StepDensity& f, const StepDensity& g, Metric metric,
                double a = 0.0, double b = 0.0);

// KL(f || g) and the matching second moment, both in closed form.
KlResult kl_divergence(const StepDensity& f, const StepDensity& g);

// A non-step density known through its pointwise values, monotone
// non-increasing on [0, support_end]. Used for the true f0 in experiments;
// step-vs-analytic integrals run adaptive Simpson at absolute tolerance
// 1e-8 per merged piece.
struct ScalarDensity {
    std::function<double(double)> value;
    double support_end = 0.0;
};

double distance(const StepDensity& f, const ScalarDensity& g, Metric metric,
                double a = 0.0, double b = 0.0);

// KL(g || f0) integrated by quadrature; `first` / `second` as in KlResult.
KlResult kl_divergence_analytic(const ScalarDensity& f, const StepDensity& g);

// Adaptive Simpson on [a, b], absolute tolerance tol.
double integrate_simpson(const std::function<double(double)>& fn, double a, double b, double tol);

} // namespace monodens
