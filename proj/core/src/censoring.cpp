#include "censim/censoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "censim/errors.hpp"
#include "censim/roots.hpp"
#include "censim/special.hpp"

namespace censim {

CensoredSample apply_type_ii(std::vector<double> x, std::size_t m) {
    const std::size_t n = x.size();
    if (n == 0 || m >= n) {
        throw std::invalid_argument("apply_type_ii: requires 0 <= m < n");
    }
    std::sort(x.begin(), x.end());
    const std::size_t r = n - m;
    CensoredSample out;
    out.t = std::move(x);
    out.delta.assign(n, 1);
    const double cutoff = out.t[r - 1]; // (n-m)-th order statistic
    for (std::size_t i = r; i < n; ++i) {
        out.t[i] = cutoff;
        out.delta[i] = 0;
    }
    return out;
}

CensoredSample apply_type_i(const std::vector<double>& x, double t_c) {
    if (!(t_c > 0.0)) throw std::invalid_argument("apply_type_i: t_c must be > 0");
    CensoredSample out;
    out.t.resize(x.size());
    out.delta.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const bool event = x[i] < t_c;
        out.t[i] = event ? x[i] : t_c;
        out.delta[i] = event ? 1 : 0;
    }
    return out;
}

CensoredSample apply_random(RngStream& rng, const std::vector<double>& x,
                            double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("apply_random: lambda must be > 0");
    }
    CensoredSample out;
    out.t.resize(x.size());
    out.delta.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double c = uniform(rng, 0.0, lambda);
        const bool event = x[i] <= c;
        out.t[i] = event ? x[i] : c;
        out.delta[i] = event ? 1 : 0;
    }
    return out;
}

CureSampleTruth sample_cure(RngStream& rng, const MixtureCureParams& params,
                            double lambda, std::size_t n) {
    // p = 1 is allowed here (every subject cured, so every t_i = c_i); the
    // density-side types keep the stricter p < 1.
    if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw std::domain_error("sample_cure: p must be in [0, 1]");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("sample_cure: lambda must be > 0");
    }
    weibull_survival(1.0, params.base); // parameter validation
    CureSampleTruth out;
    out.censored.t.resize(n);
    out.censored.delta.resize(n);
    out.cured_flags.resize(n);
    out.latent.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool cured = rng.next_double() < params.p;
        const double u_life = rng.next_double();
        const double c = uniform(rng, 0.0, lambda);
        out.cured_flags[i] = cured ? 1 : 0;
        if (cured) {
            // Infinite latent lifetime: always censored at c.
            out.latent[i] = std::numeric_limits<double>::quiet_NaN();
            out.censored.t[i] = c;
            out.censored.delta[i] = 0;
        } else {
            const double x = weibull_quantile(u_life, params.base);
            out.latent[i] = x;
            const bool event = x <= c;
            out.censored.t[i] = event ? x : c;
            out.censored.delta[i] = event ? 1 : 0;
        }
    }
    return out;
}

double calibrate_type_i(const WeibullParams& params, double pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw std::domain_error("calibrate_type_i: pi must be in (0, 1)");
    }
    weibull_survival(1.0, params); // parameter validation
    return std::pow(-std::log(pi) / params.beta, 1.0 / params.alpha);
}

double calibrate_random_analytic(const WeibullParams& params, double pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw std::domain_error("calibrate_random_analytic: pi must be in (0, 1)");
    }
    weibull_survival(1.0, params);
    const double inv_a = 1.0 / params.alpha;
    return std::pow(params.beta, -inv_a) * gamma_fn(inv_a) / (params.alpha * pi);
}

double censored_fraction_random(const WeibullParams& params, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("censored_fraction_random: lambda must be > 0");
    }
    weibull_survival(1.0, params);
    // (1/lambda) int_0^lambda exp(-beta c^alpha) dc
    //   = beta^(-1/alpha) / (alpha lambda) * gamma(1/alpha, beta lambda^alpha)
    const double inv_a = 1.0 / params.alpha;
    return std::pow(params.beta, -inv_a) / (params.alpha * lambda) *
           lower_incomplete_gamma(inv_a,
                                  params.beta * std::pow(lambda, params.alpha));
}

double censored_fraction_cure(const MixtureCureParams& params, double lambda) {
    cure_survival(1.0, params);
    return params.p +
           (1.0 - params.p) * censored_fraction_random(params.base, lambda);
}

double calibrate_random_exact(const WeibullParams& params, double pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw std::domain_error("calibrate_random_exact: pi must be in (0, 1)");
    }
    auto g = [&params, pi](double lambda) {
        return censored_fraction_random(params, lambda) - pi;
    };
    // The fraction decreases monotonically from 1 (lambda -> 0) to 0.
    double lo = 1e-6, hi = 1.0;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e12) {
            throw CalibrationError("calibrate_random_exact: target not reached");
        }
    }
    return find_root(g, {lo, hi}, 1e-6);
}

double calibrate_grid(RngStream& rng, const GridSampler& sampler, double target,
                      double lambda0, double epsilon, std::size_t n) {
    if (!(target > 0.0 && target < 1.0)) {
        throw std::domain_error("calibrate_grid: target must be in (0, 1)");
    }
    if (!(epsilon > 0.0) || !(lambda0 > 0.0) || n == 0) {
        throw std::invalid_argument("calibrate_grid: bad lambda0/epsilon/n");
    }
    double lambda = lambda0;
    for (std::size_t step = 0; step < 1000000; ++step) {
        const CensoredSample s = sampler(rng, lambda, n);
        const double frac =
            1.0 - static_cast<double>(s.events()) / static_cast<double>(s.size());
        if (frac <= target) return lambda;
        lambda += epsilon;
    }
    throw CalibrationError(
        "calibrate_grid: target censored fraction not reached within 1e6 "
        "steps (is the target below an irreducible censoring floor, e.g. a "
        "cure fraction?)");
}

double calibrate_grid_deterministic(const std::function<double(double)>& fraction,
                                    double target, double lambda0,
                                    double epsilon) {
    if (!(target > 0.0 && target < 1.0)) {
        throw std::domain_error("calibrate_grid_deterministic: target must be in (0, 1)");
    }
    if (!(epsilon > 0.0) || !(lambda0 > 0.0)) {
        throw std::invalid_argument("calibrate_grid_deterministic: bad lambda0/epsilon");
    }
    double lambda = lambda0;
    for (std::size_t step = 0; step < 1000000; ++step) {
        if (fraction(lambda) <= target) return lambda;
        lambda += epsilon;
    }
    throw CalibrationError(
        "calibrate_grid_deterministic: target not reached within 1e6 steps");
}

} // namespace censim
