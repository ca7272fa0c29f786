#pragma once

namespace monodens {

// Regularized incomplete gamma functions P(s, x) (lower) and Q(s, x) = 1 - P.
// Series for x < s + 1, continued fraction otherwise; s > 0, x >= 0.
double gamma_p(double s, double x);
double gamma_q(double s, double x);

} // namespace monodens
