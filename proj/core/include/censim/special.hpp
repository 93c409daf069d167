#pragma once

namespace censim {

// Gamma function for s > 0.
double gamma_fn(double s);

// Upper incomplete gamma Gamma(s, x) for real s (including s <= 0) and x > 0,
// unregularized. Relative accuracy ~1e-12 away from the pathological corner
// of s within ~1e-12..1e-6 of a nonpositive integer at small x (documented
// precision caveat; exact nonpositive integers are handled exactly).
double upper_incomplete_gamma(double s, double x);

// Lower incomplete gamma gamma(s, x) for s > 0, x >= 0, unregularized.
double lower_incomplete_gamma(double s, double x);

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x);

} // namespace censim
