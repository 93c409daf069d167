#include "censim/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace censim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.9189385332046727417803297; // log(sqrt(2*pi))
constexpr double kInvSqrt2 = 0.7071067811865475244008444;

// Rational initial guess for the normal quantile (Wichura's algorithm,
// double-precision branch), then Newton-polished against the erfc-based CDF
// so the final accuracy does not rest on the coefficient table.
double quantile_initial(double p) {
    const double q = p - 0.5;
    double r, num, den;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                    6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                  1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                    3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                  5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    r = (q < 0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
        r -= 1.6;
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    const double val = num / den;
    return (q < 0) ? -val : val;
}

} // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_logpdf(double x) {
    return -0.5 * x * x - kLogSqrt2Pi;
}

double normal_log_sf(double x) {
    if (x < 15.0) {
        return std::log(0.5 * std::erfc(x * kInvSqrt2));
    }
    // log Q(x) = -x^2/2 - log(x sqrt(2 pi)) + log(1 - 1/x^2 + 3/x^4 - 15/x^6)
    const double x2 = x * x;
    const double corr = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(x) - kLogSqrt2Pi + std::log(corr);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile: p must be in (0, 1)");
    }
    double x = quantile_initial(p);
    if (p > 1e-10 && p < 1.0 - 1e-10) {
        // Two Newton steps on Phi(x) - p.
        for (int i = 0; i < 2; ++i) {
            const double err = normal_cdf(x) - p;
            x -= err * std::exp(0.5 * x * x + kLogSqrt2Pi);
        }
    } else {
        // Tail: Newton in log space keeps the step well-scaled where the
        // density underflows relative to p.
        const bool upper = p > 0.5;
        const double logt = std::log(upper ? 1.0 - p : p);
        double z = upper ? x : -x; // z > 0, target: log Q(z) = logt
        for (int i = 0; i < 3; ++i) {
            const double lq = normal_log_sf(z);
            const double dlq = -std::exp(normal_logpdf(z) - lq); // d/dz log Q
            z -= (lq - logt) / dlq;
        }
        x = upper ? z : -z;
    }
    return x;
}

double sample_normal(RngStream& rng) {
    double u;
    do {
        u = rng.next_double();
    } while (u <= 0.0);
    return normal_quantile(u);
}

double trunc_normal_logpdf(double x, double mean, double sd, double lower) {
    if (!(sd > 0.0)) throw std::domain_error("trunc_normal_logpdf: sd must be > 0");
    if (x < lower) return -kInf;
    const double z = (x - mean) / sd;
    const double a = (lower - mean) / sd;
    return normal_logpdf(z) - std::log(sd) - normal_log_sf(a);
}

double sample_trunc_normal(RngStream& rng, double mean, double sd, double lower) {
    if (!(sd > 0.0)) throw std::domain_error("sample_trunc_normal: sd must be > 0");
    const double a = (lower - mean) / sd;
    double z;
    if (a < -8.0) {
        // Truncation point far below the bulk: plain draws almost never land
        // outside, so reject the (practically impossible) stragglers.
        do {
            z = sample_normal(rng);
        } while (z < a);
    } else if (a <= 8.0) {
        // Inverse CDF restricted to the upper tail [a, inf).
        const double qa = 0.5 * std::erfc(a * kInvSqrt2); // Q(a) >= Q(8) > 6e-16
        const double v = qa * (1.0 - rng.next_double());  // v in (0, qa]
        z = -normal_quantile(v);
        if (z < a) z = a; // guard against roundoff at the boundary
    } else {
        // Far-right truncation: exponential tilting (Robert's method).
        const double astar = 0.5 * (a + std::sqrt(a * a + 4.0));
        for (;;) {
            double u1;
            do {
                u1 = rng.next_double();
            } while (u1 <= 0.0);
            z = a - std::log(u1) / astar;
            const double rho = std::exp(-0.5 * (z - astar) * (z - astar));
            if (rng.next_double() <= rho) break;
        }
    }
    return mean + sd * z;
}

} // namespace censim
