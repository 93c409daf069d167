#pragma once

#include <functional>

namespace censim {

// A sign-changing interval for scalar root finding.
struct Bracket {
    double lo;
    double hi;
};

// Brent's method. Requires f(lo) and f(hi) of opposite sign (zero endpoint
// values count as roots). tol is an absolute x-tolerance.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol = 1e-12);

// find_root with automatic bracket expansion: if the initial bracket does not
// change sign, hi is doubled until it does or exceeds hi_cap (then throws
// std::runtime_error). Default initial bracket (1e-6, 100], cap 1e6.
double find_root_expanding(const std::function<double(double)>& f,
                           Bracket initial = {1e-6, 100.0},
                           double tol = 1e-12, double hi_cap = 1e6);

} // namespace censim
