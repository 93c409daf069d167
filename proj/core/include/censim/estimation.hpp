#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "censim/censoring.hpp"

namespace censim {

// Result of a maximum-likelihood fit. `hessian` is the second-derivative
// matrix of the log-likelihood at the estimates (observed information is its
// negation); standard errors and Wald intervals come from the inverse of the
// negated Hessian and are NaN when that matrix is singular or has a
// nonpositive diagonal (CIs unavailable / parameter non-identifiable).
struct FitResult {
    std::vector<std::string> parameters;
    std::vector<double> estimates;
    double loglik = 0.0;
    std::vector<std::vector<double>> hessian;
    std::vector<double> std_errors;
    double ci_level = 0.95;
    std::vector<double> ci_lower;
    std::vector<double> ci_upper;
    bool converged = false;
    std::size_t n = 0;
    std::size_t r = 0; // observed events

    double censored_fraction() const {
        return n == 0 ? 0.0
                      : 1.0 - static_cast<double>(r) / static_cast<double>(n);
    }
};

// --- log-likelihood kernels (exposed for property tests and profiling) ----

// Type-II kernel, constant combinatorial term n!/(n-r)! omitted.
double loglik_type_ii(const CensoredSample& sample, double alpha, double beta);
double loglik_type_i(const CensoredSample& sample, double t_c, double alpha,
                     double beta);
double loglik_random(const CensoredSample& sample, double alpha, double beta);
double loglik_cure(const CensoredSample& sample, double alpha, double beta,
                   double p);
double loglik_plc(const std::vector<double>& x, double x_min, double alpha,
                  double beta);

// --- score functions of the concentrated alpha equations -----------------
// Each fit solves alpha_score_*(sample, alpha) = 0 with beta profiled out;
// beta_plugin_* gives the corresponding profile beta.

double alpha_score_type_ii(const CensoredSample& sample, double alpha);
double beta_plugin_type_ii(const CensoredSample& sample, double alpha);
double alpha_score_type_i(const CensoredSample& sample, double t_c, double alpha);
double beta_plugin_type_i(const CensoredSample& sample, double t_c, double alpha);
double alpha_score_random(const CensoredSample& sample, double alpha);
double beta_plugin_random(const CensoredSample& sample, double alpha);

// --- fits -----------------------------------------------------------------

// Sample must come from a type-II scheme (sorted, trailing censored ties at
// the last event time); requires r >= 2 events.
FitResult fit_type_ii(const CensoredSample& sample);

// All censored times must equal t_c; requires r >= 2.
FitResult fit_type_i(const CensoredSample& sample, double t_c);

// Random (non-informative) censoring; censored times contribute to the
// Weibull sufficient statistic sum t_i^alpha. Requires r >= 2.
FitResult fit_random(const CensoredSample& sample);

// Three-parameter mixture cure fit by bounded derivative-free maximization.
// The overload without init uses the standard warm start: (alpha, beta) from
// fit_random on the same data and p = empirical censored fraction.
// Requires r >= 3.
FitResult fit_cure_random(const CensoredSample& sample);
FitResult fit_cure_random(const CensoredSample& sample,
                          std::array<double, 3> init);

// Power law with exponential cutoff on [x_min, inf); all x >= x_min, n >= 3.
// Any incomplete-gamma domain problem during the search is mapped to a -inf
// likelihood (the step is rejected).
FitResult fit_plc(const std::vector<double>& x, double x_min,
                  std::array<double, 2> init);

// Symmetric Wald interval theta_hat +/- z_{1-xi/2} * se.
std::pair<double, double> wald_interval(double estimate, double std_error,
                                        double xi);

// Recomputes std errors and Wald intervals at level 1-xi from the stored
// Hessian. Throws FitError on a singular negated Hessian; parameters with a
// nonpositive inverse-diagonal get NaN errors/intervals (non-identifiable).
FitResult confidence_intervals(FitResult result, double xi);

// JSON rendering of a FitResult (fields: parameters, estimates, std_errors,
// ci{level, lower, upper}, loglik, converged, n, r).
std::string fit_result_json(const FitResult& result);

} // namespace censim
