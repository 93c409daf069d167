#include "censim/quadrature.hpp"

#include <cmath>

namespace censim {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double& fm) {
    const double m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double eps, int depth) {
    const double lm_mid = 0.5 * (a + m);
    const double rm_mid = 0.5 * (m + b);
    const double flm = f(lm_mid);
    const double frm = f(rm_mid);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) {
        return left + right + delta / 15.0;
    }
    return adapt(f, a, fa, m, fm, lm_mid, flm, left, 0.5 * eps, depth - 1) +
           adapt(f, m, fm, b, fb, rm_mid, frm, right, 0.5 * eps, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    double fm;
    const double whole = simpson(f, a, fa, b, fb, fm);
    const double eps = rel_tol * std::max(std::fabs(whole), 1e-300);
    return adapt(f, a, fa, b, fb, 0.5 * (a + b), fm, whole, eps, 48);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol) {
    // x = a + t/(1-t), dx = dt/(1-t)^2, t in [0, 1).
    auto g = [&f, a](double t) {
        if (t >= 1.0) return 0.0;
        const double om = 1.0 - t;
        return f(a + t / om) / (om * om);
    };
    return integrate(g, 0.0, 1.0, rel_tol);
}

} // namespace censim
