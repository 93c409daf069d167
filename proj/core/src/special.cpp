#include "censim/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace censim {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606065121;
constexpr int kMaxIter = 500;

// Continued fraction for Gamma(s, x) (modified Lentz). Valid for any real s
// when x is not too small; convergence degrades as x -> 0 with s <= 0.
double upper_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / (b == 0.0 ? tiny : b);
    double f = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(s * std::log(x) - x) * f;
}

// Series for the lower incomplete gamma, s > 0, x < s + 1.
double lower_series(double s, double x) {
    if (x == 0.0) return 0.0;
    double term = 1.0 / s;
    double sum = term;
    double sj = s;
    for (int i = 1; i <= kMaxIter; ++i) {
        sj += 1.0;
        term *= x / sj;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return std::exp(s * std::log(x) - x) * sum;
}

// E1 for small x via the standard convergent series.
double e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k <= kMaxIter; ++k) {
        term *= -x / static_cast<double>(k);
        const double add = -term / static_cast<double>(k);
        sum += add;
        if (std::fabs(add) < std::fabs(sum) * 1e-16 + 1e-300) break;
    }
    return sum;
}

} // namespace

double gamma_fn(double s) {
    if (!(s > 0.0)) throw std::domain_error("gamma_fn: s must be > 0");
    return std::tgamma(s);
}

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: x must be > 0");
    return x < 1.0 ? e1_series(x) : upper_cf(0.0, x);
}

double lower_incomplete_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("lower_incomplete_gamma: s must be > 0");
    if (x < 0.0) throw std::domain_error("lower_incomplete_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return lower_series(s, x);
    return std::tgamma(s) - upper_cf(s, x);
}

double upper_incomplete_gamma(double s, double x) {
    if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be > 0");
    if (s > 0.0) {
        if (x < s + 1.0) return std::tgamma(s) - lower_series(s, x);
        return upper_cf(s, x);
    }
    // s <= 0. The continued fraction still converges for moderate x; for
    // small x walk down from a base order in (0, 1] by
    //   Gamma(s-1, x) = (Gamma(s, x) - x^{s-1} e^{-x}) / (s - 1),
    // treating landings at (numerically) integer orders via E1.
    if (x >= 0.25) return upper_cf(s, x);
    const int m = static_cast<int>(std::floor(-s)) + 1;
    double sj = s + static_cast<double>(m); // base order in (0, 1]
    double g = (std::fabs(sj) < 1e-12) ? e1_series(x)
                                       : std::tgamma(sj) - lower_series(sj, x);
    for (int j = 0; j < m; ++j) {
        sj -= 1.0;
        if (std::fabs(sj) < 1e-12) {
            g = e1_series(x);
        } else {
            g = (g - std::exp(sj * std::log(x) - x)) / sj;
        }
    }
    return g;
}

} // namespace censim
