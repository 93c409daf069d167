#pragma once

#include <vector>

namespace censim {

// Weibull in the rate parameterization:
//   f(x) = alpha * beta * x^(alpha-1) * exp(-beta * x^alpha),
//   S(x) = exp(-beta * x^alpha).
// beta has units time^(-alpha) (it is NOT the usual scale parameter).
struct WeibullParams {
    double alpha;
    double beta;
};

// Finite Weibull mixture; weights must be nonnegative and sum to 1.
struct MixtureParams {
    std::vector<double> weights;
    std::vector<WeibullParams> components;
};

// Power law with exponential cutoff on [x_min, inf):
//   f(x) ∝ x^(-alpha) * exp(-beta * x).
struct PlcParams {
    double alpha;
    double beta;
    double x_min;
};

// Mixture cure model: a fraction p is immune to the event, the rest follow
// the base Weibull. Population survival p + (1-p) S(x) is improper.
struct MixtureCureParams {
    double p;
    WeibullParams base;
};

// Negative-binomial (destructive) cure family:
//   S_pop(x) = (1 + kappa * gamma_rate * (1 - S(x)))^(-1/kappa).
// kappa -> 0 recovers the promotion-time model exp(-gamma_rate (1 - S)).
// Requires kappa * gamma_rate >= -1 so S_pop stays defined at x -> inf.
struct NegBinCureParams {
    double kappa;
    double gamma_rate;
    WeibullParams base;
};

double weibull_pdf(double x, const WeibullParams& params);
double weibull_cdf(double x, const WeibullParams& params);
double weibull_survival(double x, const WeibullParams& params);
// alpha*beta*x^(alpha-1); +inf at x = 0 when alpha < 1.
double weibull_hazard(double x, const WeibullParams& params);
// Requires 0 <= u < 1.
double weibull_quantile(double u, const WeibullParams& params);

double mixture_pdf(double x, const MixtureParams& params);
double mixture_cdf(double x, const MixtureParams& params);

// log of the unnormalized PLC density: -alpha*log(x) - beta*x, or -inf for
// x < x_min.
double plc_log_unnormalized(double x, const PlcParams& params);
double plc_pdf(double x, const PlcParams& params);
// 1 - Gamma(1-alpha, beta*x) / Gamma(1-alpha, beta*x_min).
double plc_cdf(double x, const PlcParams& params);

double cure_survival(double x, const MixtureCureParams& params);
// Density of the susceptible part: (1-p) * weibull_pdf.
double cure_pdf(double x, const MixtureCureParams& params);

double negbin_cure_survival(double x, const NegBinCureParams& params);

} // namespace censim
