#include "core/mixture.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace monodens {

AtomicMixture::AtomicMixture(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    require(!atoms_.empty(), errc::invalid_argument, "AtomicMixture: need at least one atom");
    require(atoms_.size() == weights_.size(), errc::invalid_argument,
            "AtomicMixture: atoms and weights differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        require(std::isfinite(atoms_[i]) && atoms_[i] > 0.0, errc::invalid_argument,
                "AtomicMixture: atoms must be positive");
        if (i > 0)
            require(atoms_[i] > atoms_[i - 1], errc::invalid_argument,
                    "AtomicMixture: atoms must be strictly increasing");
        require(weights_[i] >= 0.0, errc::invalid_argument, "AtomicMixture: weights must be non-negative");
        total += weights_[i];
    }
    require(std::fabs(total - 1.0) <= 1e-12, errc::invalid_argument,
            "AtomicMixture: weights must sum to 1 within 1e-12");
}

double AtomicMixture::density(double x) const {
    require(x >= 0.0, errc::invalid_argument, "density: x must be non-negative");
    auto first = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    double value = 0.0;
    for (auto it = first; it != atoms_.end(); ++it)
        value += weights_[static_cast<std::size_t>(it - atoms_.begin())] / *it;
    return value;
}

StepDensity AtomicMixture::to_step_density() const {
    std::vector<double> knots;
    knots.reserve(atoms_.size() + 1);
    knots.push_back(0.0);
    knots.insert(knots.end(), atoms_.begin(), atoms_.end());

    // Height on (atom_{j-1}, atom_j] is the suffix sum of weight/atom.
    std::vector<double> heights(atoms_.size());
    double suffix = 0.0;
    for (std::size_t j = atoms_.size(); j-- > 0;) {
        suffix += weights_[j] / atoms_[j];
        heights[j] = suffix;
    }
    return StepDensity(std::move(knots), std::move(heights), atoms_.back());
}

void AtomicMixture::check_support_bound(double bound) const {
    require(atoms_.back() <= bound, errc::bound_violation, "AtomicMixture: atom exceeds declared support bound");
}

StepDensity::StepDensity(std::vector<double> knots, std::vector<double> heights,
                         std::optional<double> support_bound)
    : knots_(std::move(knots)), heights_(std::move(heights)), support_bound_(support_bound) {
    require(knots_.size() >= 2, errc::invalid_argument, "StepDensity: need at least one piece");
    require(heights_.size() + 1 == knots_.size(), errc::invalid_argument,
            "StepDensity: heights must have one entry per piece");
    require(knots_.front() == 0.0, errc::invalid_argument, "StepDensity: first knot must be 0");
    double mass = 0.0;
    for (std::size_t j = 0; j < heights_.size(); ++j) {
        require(knots_[j + 1] > knots_[j], errc::invalid_argument, "StepDensity: knots must be strictly increasing");
        require(std::isfinite(heights_[j]) && heights_[j] >= 0.0, errc::invalid_argument,
                "StepDensity: heights must be finite and non-negative");
        if (j > 0)
            require(heights_[j] <= heights_[j - 1] + 1e-12, errc::shape_violation,
                    "StepDensity: heights must be non-increasing");
        mass += heights_[j] * (knots_[j + 1] - knots_[j]);
    }
    require(std::fabs(mass - 1.0) <= 1e-10, errc::invalid_argument,
            "StepDensity: density must integrate to 1 within 1e-10");
    if (support_bound_)
        require(*support_bound_ >= knots_.back(), errc::bound_violation,
                "StepDensity: support bound below last knot");
}

double StepDensity::value(double x) const {
    require(x >= 0.0, errc::invalid_argument, "value: x must be non-negative");
    if (x == 0.0) return heights_.front();
    if (x > knots_.back()) return 0.0;
    // piece j with knots[j] < x <= knots[j+1]
    auto it = std::lower_bound(knots_.begin() + 1, knots_.end(), x);
    return heights_[static_cast<std::size_t>(it - knots_.begin()) - 1];
}

double StepDensity::integral() const {
    double mass = 0.0;
    for (std::size_t j = 0; j < heights_.size(); ++j) mass += heights_[j] * (knots_[j + 1] - knots_[j]);
    return mass;
}

AtomicMixture StepDensity::to_mixture() const {
    std::vector<double> atoms;
    std::vector<double> weights;
    atoms.reserve(heights_.size());
    weights.reserve(heights_.size());
    for (std::size_t j = 0; j < heights_.size(); ++j) {
        const double next = (j + 1 < heights_.size()) ? heights_[j + 1] : 0.0;
        const double w = (heights_[j] - next) * knots_[j + 1];
        if (w > 0.0) {
            atoms.push_back(knots_[j + 1]);
            weights.push_back(w);
        }
    }
    require(!atoms.empty(), errc::invalid_argument, "to_mixture: density is identically zero");
    // The telescoping sum equals the integral; renormalize the residual
    // rounding so the mixture constructor's 1e-12 simplex check holds.
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    return AtomicMixture(std::move(atoms), std::move(weights));
}

AtomicMixture make_sorted_mixture(std::vector<double> atoms, std::vector<double> weights) {
    require(atoms.size() == weights.size() && !atoms.empty(), errc::invalid_argument,
            "make_sorted_mixture: atoms and weights must be non-empty and equal length");
    std::vector<std::size_t> order(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });

    std::vector<double> sorted_atoms;
    std::vector<double> sorted_weights;
    sorted_atoms.reserve(atoms.size());
    sorted_weights.reserve(atoms.size());
    for (std::size_t idx : order) {
        if (!sorted_atoms.empty() && atoms[idx] == sorted_atoms.back())
            sorted_weights.back() += weights[idx]; // exact tie: merge
        else {
            sorted_atoms.push_back(atoms[idx]);
            sorted_weights.push_back(weights[idx]);
        }
    }
    double total = 0.0;
    for (double w : sorted_weights) total += w;
    require(total > 0.0, errc::invalid_argument, "make_sorted_mixture: weights sum to zero");
    for (double& w : sorted_weights) w /= total;
    return AtomicMixture(std::move(sorted_atoms), std::move(sorted_weights));
}

std::vector<double> sample_iid(const AtomicMixture& mixture, std::size_t n, std::uint64_t seed) {
    std::vector<double> cumulative(mixture.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        acc += mixture.weights()[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;

    Rng rng(seed);
    std::vector<double> sample(n);
    for (auto& x : sample) {
        const double u = rng.uniform01();
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        const double theta = mixture.atoms()[std::min(idx, mixture.size() - 1)];
        x = theta * rng.uniform01_open0(); // in (0, theta]
    }
    return sample;
}

} // namespace monodens
