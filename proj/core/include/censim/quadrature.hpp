#pragma once

#include <functional>

namespace censim {

// Adaptive Simpson integration of f over [a, b] to the requested relative
// tolerance (with respect to the magnitude of the whole integral).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

// Integral of f over [a, inf), via the substitution x = a + t/(1-t).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol = 1e-10);

} // namespace censim
