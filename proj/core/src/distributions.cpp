#include "censim/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "censim/special.hpp"

namespace censim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check(const WeibullParams& p, const char* who) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw std::domain_error(std::string(who) +
                                ": alpha and beta must be > 0");
    }
}

void check(const PlcParams& p, const char* who) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0) || !(p.x_min > 0.0)) {
        throw std::domain_error(std::string(who) +
                                ": alpha, beta, x_min must be > 0");
    }
}

void check(const MixtureParams& p, const char* who) {
    if (p.weights.size() != p.components.size() || p.weights.empty()) {
        throw std::domain_error(std::string(who) +
                                ": weights/components size mismatch");
    }
    double total = 0.0;
    for (double w : p.weights) {
        if (!(w > 0.0)) throw std::domain_error(std::string(who) + ": weights must be > 0");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw std::domain_error(std::string(who) + ": weights must sum to 1");
    }
}

void check_x(double x, const char* who) {
    if (x < 0.0) throw std::domain_error(std::string(who) + ": x must be >= 0");
}

void check(const MixtureCureParams& p, const char* who) {
    if (!(p.p >= 0.0 && p.p < 1.0)) {
        throw std::domain_error(std::string(who) + ": p must be in [0, 1)");
    }
    check(p.base, who);
}

} // namespace

double weibull_pdf(double x, const WeibullParams& params) {
    check(params, "weibull_pdf");
    check_x(x, "weibull_pdf");
    if (x == 0.0) {
        if (params.alpha < 1.0) return kInf;
        if (params.alpha == 1.0) return params.beta;
        return 0.0;
    }
    return params.alpha * params.beta * std::pow(x, params.alpha - 1.0) *
           std::exp(-params.beta * std::pow(x, params.alpha));
}

double weibull_cdf(double x, const WeibullParams& params) {
    check(params, "weibull_cdf");
    check_x(x, "weibull_cdf");
    if (x == 0.0) return 0.0;
    return -std::expm1(-params.beta * std::pow(x, params.alpha));
}

double weibull_survival(double x, const WeibullParams& params) {
    check(params, "weibull_survival");
    check_x(x, "weibull_survival");
    if (x == 0.0) return 1.0;
    return std::exp(-params.beta * std::pow(x, params.alpha));
}

double weibull_hazard(double x, const WeibullParams& params) {
    check(params, "weibull_hazard");
    check_x(x, "weibull_hazard");
    if (x == 0.0) {
        if (params.alpha < 1.0) return kInf;
        if (params.alpha == 1.0) return params.beta;
        return 0.0;
    }
    return params.alpha * params.beta * std::pow(x, params.alpha - 1.0);
}

double weibull_quantile(double u, const WeibullParams& params) {
    check(params, "weibull_quantile");
    if (!(u >= 0.0 && u < 1.0)) {
        throw std::domain_error("weibull_quantile: u must be in [0, 1)");
    }
    // x = ((-log(1-u)) / beta)^(1/alpha)
    return std::pow(-std::log1p(-u) / params.beta, 1.0 / params.alpha);
}

double mixture_pdf(double x, const MixtureParams& params) {
    check(params, "mixture_pdf");
    double v = 0.0;
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
        v += params.weights[i] * weibull_pdf(x, params.components[i]);
    }
    return v;
}

double mixture_cdf(double x, const MixtureParams& params) {
    check(params, "mixture_cdf");
    double v = 0.0;
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
        v += params.weights[i] * weibull_cdf(x, params.components[i]);
    }
    return v;
}

double plc_log_unnormalized(double x, const PlcParams& params) {
    // beta = 0 is allowed here (pure power-law limiting call); the normalized
    // operations require beta > 0.
    if (!(params.alpha > 0.0) || !(params.beta >= 0.0) || !(params.x_min > 0.0)) {
        throw std::domain_error(
            "plc_log_unnormalized: alpha, x_min must be > 0 and beta >= 0");
    }
    if (x < params.x_min) return -kInf;
    return -params.alpha * std::log(x) - params.beta * x;
}

double plc_pdf(double x, const PlcParams& params) {
    check(params, "plc_pdf");
    if (x < params.x_min) return 0.0;
    // Normalizer: int_{x_min}^inf t^-a e^{-bt} dt = b^{a-1} Gamma(1-a, b*x_min).
    const double norm = std::pow(params.beta, params.alpha - 1.0) *
                        upper_incomplete_gamma(1.0 - params.alpha,
                                               params.beta * params.x_min);
    return std::exp(plc_log_unnormalized(x, params)) / norm;
}

double plc_cdf(double x, const PlcParams& params) {
    check(params, "plc_cdf");
    if (x <= params.x_min) return 0.0;
    const double s = 1.0 - params.alpha;
    return 1.0 - upper_incomplete_gamma(s, params.beta * x) /
                     upper_incomplete_gamma(s, params.beta * params.x_min);
}

double cure_survival(double x, const MixtureCureParams& params) {
    check(params, "cure_survival");
    check_x(x, "cure_survival");
    return params.p + (1.0 - params.p) * weibull_survival(x, params.base);
}

double cure_pdf(double x, const MixtureCureParams& params) {
    check(params, "cure_pdf");
    check_x(x, "cure_pdf");
    return (1.0 - params.p) * weibull_pdf(x, params.base);
}

double negbin_cure_survival(double x, const NegBinCureParams& params) {
    check(params.base, "negbin_cure_survival");
    check_x(x, "negbin_cure_survival");
    if (!(params.gamma_rate > 0.0)) {
        throw std::domain_error("negbin_cure_survival: gamma_rate must be > 0");
    }
    if (params.kappa * params.gamma_rate < -1.0) {
        throw std::domain_error(
            "negbin_cure_survival: requires kappa * gamma_rate >= -1");
    }
    const double attacked = 1.0 - weibull_survival(x, params.base);
    if (std::fabs(params.kappa) < 1e-8) {
        return std::exp(-params.gamma_rate * attacked);
    }
    const double basev = 1.0 + params.kappa * params.gamma_rate * attacked;
    if (basev <= 0.0) {
        throw std::domain_error(
            "negbin_cure_survival: 1 + kappa*gamma_rate*(1-S) must be > 0");
    }
    return std::pow(basev, -1.0 / params.kappa);
}

} // namespace censim
