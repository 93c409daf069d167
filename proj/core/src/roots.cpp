#include "censim/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace censim {

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol) {
    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw std::runtime_error("find_root: bracket does not change sign");
    }
    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // Inverse quadratic / secant step.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                                   std::fabs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

double find_root_expanding(const std::function<double(double)>& f,
                           Bracket initial, double tol, double hi_cap) {
    double lo = initial.lo, hi = initial.hi;
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    while ((flo > 0.0) == (fhi > 0.0)) {
        if (hi >= hi_cap) {
            throw std::runtime_error(
                "find_root_expanding: no sign change up to hi = " +
                std::to_string(hi));
        }
        hi = std::min(hi * 2.0, hi_cap);
        fhi = f(hi);
    }
    return find_root(f, {lo, hi}, tol);
}

} // namespace censim
