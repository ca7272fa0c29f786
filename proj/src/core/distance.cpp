#include "core/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace monodens {

namespace {

constexpr double kSimpsonTol = 1e-8;
constexpr double kInf = std::numeric_limits<double>::infinity();

double domain_end(const StepDensity& d) {
    return d.support_bound() ? std::max(*d.support_bound(), d.end()) : d.end();
}

// Sorted union of the two knot sets; both densities are constant between
// consecutive entries.
std::vector<double> merged_knots(const StepDensity& f, const StepDensity& g) {
    std::vector<double> knots;
    knots.reserve(f.knots().size() + g.knots().size());
    std::merge(f.knots().begin(), f.knots().end(), g.knots().begin(), g.knots().end(),
               std::back_inserter(knots));
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return knots;
}

double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& fn, double a, double m, double b,
                       double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = simpson_rule(a, m, fa, flm, fm);
    const double right = simpson_rule(m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_recurse(fn, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(fn, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

void check_interval(double a, double b, double end_f, double end_g) {
    require(a >= 0.0 && a < b, errc::invalid_interval, "sup metric: need 0 <= a < b");
    require(a < std::max(end_f, end_g), errc::invalid_interval,
            "sup metric: interval lies outside both supports");
}

} // namespace

double integrate_simpson(const std::function<double(double)>& fn, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = fn(a), fm = fn(m), fb = fn(b);
    const double whole = simpson_rule(a, b, fa, fm, fb);
    return simpson_recurse(fn, a, m, b, fa, fm, fb, whole, tol, 48);
}

double distance(const StepDensity& f, const StepDensity& g, Metric metric, double a, double b) {
    if (metric == Metric::SupOnInterval) check_interval(a, b, domain_end(f), domain_end(g));

    const auto knots = merged_knots(f, g);
    double l1 = 0.0;
    double hsq = 0.0;
    double sup = 0.0;
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        const double lo = knots[j];
        const double hi = knots[j + 1];
        const double mid = 0.5 * (lo + hi);
        const double p = f.value(mid);
        const double q = g.value(mid);
        switch (metric) {
        case Metric::L1:
            l1 += std::fabs(p - q) * (hi - lo);
            break;
        case Metric::Hellinger: {
            const double d = std::sqrt(p) - std::sqrt(q);
            hsq += 0.5 * d * d * (hi - lo);
            break;
        }
        case Metric::SupOnInterval:
            // right-closed pieces: (lo, hi] meets [a, b] iff hi >= a and lo < b
            if (hi >= a && lo < b) sup = std::max(sup, std::fabs(p - q));
            break;
        }
    }
    switch (metric) {
    case Metric::L1: return l1;
    case Metric::Hellinger: return std::sqrt(hsq);
    case Metric::SupOnInterval: return sup;
    }
    fail(errc::invalid_argument, "distance: unknown metric");
}

KlResult kl_divergence(const StepDensity& f, const StepDensity& g) {
    const auto knots = merged_knots(f, g);
    KlResult out;
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        const double lo = knots[j];
        const double hi = knots[j + 1];
        const double p = f.value(0.5 * (lo + hi));
        if (p <= 0.0) continue;
        const double q = g.value(0.5 * (lo + hi));
        if (q <= 0.0) {
            out.infinite = true;
            out.kl = kInf;
            out.second_moment = kInf;
            return out;
        }
        const double lr = std::log(p / q);
        out.kl += p * lr * (hi - lo);
        out.second_moment += p * lr * lr * (hi - lo);
    }
    out.kl = std::max(out.kl, 0.0);
    return out;
}

double distance(const StepDensity& f, const ScalarDensity& g, Metric metric, double a, double b) {
    const double end = std::max(domain_end(f), g.support_end);
    if (metric == Metric::SupOnInterval) check_interval(a, b, domain_end(f), g.support_end);

    std::vector<double> knots = f.knots();
    if (knots.back() < end) knots.push_back(end);

    double l1 = 0.0;
    double hsq = 0.0;
    double sup = 0.0;
    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        const double lo = knots[j];
        const double hi = knots[j + 1];
        const double p = f.value(0.5 * (lo + hi));
        const auto g_at = [&](double x) { return x <= g.support_end ? g.value(x) : 0.0; };
        switch (metric) {
        case Metric::L1: {
            // g is monotone within a piece, so |p - g| has at most one kink;
            // split there to keep Simpson on smooth integrands.
            double cut = hi;
            const double dlo = g_at(lo) - p;
            const double dhi = g_at(hi) - p;
            if (dlo * dhi < 0.0) {
                double x0 = lo, x1 = hi;
                for (int it = 0; it < 80; ++it) {
                    const double m = 0.5 * (x0 + x1);
                    ((g_at(m) - p) * dlo > 0.0 ? x0 : x1) = m;
                }
                cut = 0.5 * (x0 + x1);
            }
            const auto integrand = [&](double x) { return std::fabs(g_at(x) - p); };
            l1 += integrate_simpson(integrand, lo, cut, kSimpsonTol);
            if (cut < hi) l1 += integrate_simpson(integrand, cut, hi, kSimpsonTol);
            break;
        }
        case Metric::Hellinger: {
            const auto integrand = [&](double x) {
                const double d = std::sqrt(std::max(g_at(x), 0.0)) - std::sqrt(p);
                return 0.5 * d * d;
            };
            hsq += integrate_simpson(integrand, lo, hi, kSimpsonTol);
            break;
        }
        case Metric::SupOnInterval:
            // monotone g: extremes of |p - g| sit at sub-piece endpoints
            if (hi >= a && lo < b) {
                sup = std::max(sup, std::fabs(p - g_at(std::clamp(a, lo, hi))));
                sup = std::max(sup, std::fabs(p - g_at(std::clamp(b, lo, hi))));
            }
            break;
        }
    }
    switch (metric) {
    case Metric::L1: return l1;
    case Metric::Hellinger: return std::sqrt(hsq);
    case Metric::SupOnInterval: return sup;
    }
    fail(errc::invalid_argument, "distance: unknown metric");
}

KlResult kl_divergence_analytic(const ScalarDensity& f, const StepDensity& g) {
    KlResult out;
    std::vector<double> knots = g.knots();
    if (knots.back() < f.support_end) knots.push_back(f.support_end);

    for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
        const double lo = knots[j];
        const double hi = std::min(knots[j + 1], f.support_end);
        if (hi <= lo) break;
        const double q = g.value(0.5 * (lo + hi));
        if (q <= 0.0) {
            // f carries mass where g vanishes?
            const double mass = integrate_simpson([&](double x) { return f.value(x); }, lo, hi, kSimpsonTol);
            if (mass > 1e-12) {
                out.infinite = true;
                out.kl = kInf;
                out.second_moment = kInf;
                return out;
            }
            continue;
        }
        const auto kl_term = [&](double x) {
            const double p = f.value(x);
            return p > 0.0 ? p * std::log(p / q) : 0.0;
        };
        const auto sq_term = [&](double x) {
            const double p = f.value(x);
            if (p <= 0.0) return 0.0;
            const double lr = std::log(p / q);
            return p * lr * lr;
        };
        out.kl += integrate_simpson(kl_term, lo, hi, kSimpsonTol);
        out.second_moment += integrate_simpson(sq_term, lo, hi, kSimpsonTol);
    }
    return out;
}

} // namespace monodens
