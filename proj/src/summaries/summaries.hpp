#pragma once

#include <string>
#include <variant>
#include <vector>

#include "core/distance.hpp"
#include "mcmc/mcmc.hpp"

namespace monodens {

// Per-draw distances to a reference density; entries may be +inf under KL.
struct LossSample {
    std::vector<double> distances;
    std::string metric;
    std::string reference;
};

// Reference for loss computation: either an exact step density or an
// analytic one (the true f0 of an experiment).
using ReferenceDensity = std::variant<StepDensity, ScalarDensity>;

LossSample compute_loss_sample(const PosteriorDraws& draws, const ReferenceDensity& reference,
                               Metric metric, double a = 0.0, double b = 0.0);

// |f_P(x) - reference_value| per draw (the fixed-point loss).
LossSample compute_pointwise_loss(const PosteriorDraws& draws, double x, double reference_value);

// Posterior median at x: the smallest draw value v with strictly more than
// half of the draws at or below v.
double posterior_median_pointwise(const PosteriorDraws& draws, double x);

// Smallest radius whose d-ball around the reference holds at least `mass`
// of the posterior draws.
double posterior_radius(const PosteriorDraws& draws, const ReferenceDensity& reference, Metric metric,
                        double mass, double a = 0.0, double b = 0.0);
double radius_at_mass(const LossSample& losses, double mass);

struct Band {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Pointwise equal-tail empirical band at the given level.
Band credible_band(const PosteriorDraws& draws, const std::vector<double>& grid, double level);

// Pointwise posterior mean (reported, never used as an acceptance statistic).
std::vector<double> posterior_mean_curve(const PosteriorDraws& draws, const std::vector<double>& grid);

} // namespace monodens
