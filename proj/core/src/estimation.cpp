#include "censim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "censim/errors.hpp"
#include "censim/normal.hpp"
#include "censim/optim.hpp"
#include "censim/roots.hpp"
#include "censim/special.hpp"

namespace censim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_shape(const CensoredSample& sample, const char* who) {
    if (sample.t.size() != sample.delta.size()) {
        throw FitError(std::string(who) + ": t/delta size mismatch");
    }
    if (sample.t.empty()) throw FitError(std::string(who) + ": empty sample");
}

void check_event_times(const CensoredSample& sample, const char* who) {
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        if (sample.delta[i] && !(sample.t[i] > 0.0)) {
            throw FitError(std::string(who) + ": nonpositive event time at row " +
                           std::to_string(i + 1));
        }
        if (sample.t[i] < 0.0) {
            throw FitError(std::string(who) + ": negative observation time at row " +
                           std::to_string(i + 1));
        }
    }
}

// Shared Weibull kernel. For all three right-censoring schemes the censored
// entries carry their censoring time in t, so
//   l(a, b) = r log a + r log b + (a-1) sum_{events} log t - b sum_all t^a.
double weibull_censored_loglik(const CensoredSample& sample, double alpha,
                               double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) return -kInf;
    double r = 0.0, sum_log = 0.0, sum_pow = 0.0;
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        const double t = sample.t[i];
        if (sample.delta[i]) {
            if (!(t > 0.0)) return -kInf;
            r += 1.0;
            sum_log += std::log(t);
        }
        if (t > 0.0) sum_pow += std::pow(t, alpha);
    }
    return r * std::log(alpha) + r * std::log(beta) + (alpha - 1.0) * sum_log -
           beta * sum_pow;
}

// Concentrated alpha score shared by the three schemes:
//   g(a) = r/a + sum_{events} log t - (r / sum_all t^a) sum_all t^a log t.
// Entries with t = 0 contribute 0 to both power sums (the a > 0 limit).
double shared_alpha_score(const CensoredSample& sample, double alpha) {
    double r = 0.0, sum_log = 0.0, sum_pow = 0.0, sum_pow_log = 0.0;
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        const double t = sample.t[i];
        if (sample.delta[i]) {
            r += 1.0;
            sum_log += std::log(t);
        }
        if (t > 0.0) {
            const double w = std::pow(t, alpha);
            sum_pow += w;
            sum_pow_log += w * std::log(t);
        }
    }
    return r / alpha + sum_log - (r / sum_pow) * sum_pow_log;
}

double shared_beta_plugin(const CensoredSample& sample, double alpha) {
    double r = 0.0, sum_pow = 0.0;
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        if (sample.delta[i]) r += 1.0;
        if (sample.t[i] > 0.0) sum_pow += std::pow(sample.t[i], alpha);
    }
    return r / sum_pow;
}

// Standard errors / intervals from the stored Hessian. When throw_on_singular
// is false a singular matrix just leaves NaNs behind (fit reported without
// intervals).
void apply_intervals(FitResult& result, double xi, bool throw_on_singular) {
    const std::size_t k = result.estimates.size();
    result.ci_level = 1.0 - xi;
    result.std_errors.assign(k, kNaN);
    result.ci_lower.assign(k, kNaN);
    result.ci_upper.assign(k, kNaN);

    std::vector<std::vector<double>> neg(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) neg[i][j] = -result.hessian[i][j];
    }
    std::vector<std::vector<double>> cov;
    if (!invert_matrix(neg, cov)) {
        if (throw_on_singular) {
            throw FitError("confidence_intervals: singular observed information");
        }
        return;
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (cov[i][i] > 0.0) {
            result.std_errors[i] = std::sqrt(cov[i][i]);
            const auto [lo, hi] =
                wald_interval(result.estimates[i], result.std_errors[i], xi);
            result.ci_lower[i] = lo;
            result.ci_upper[i] = hi;
        }
        // else: nonpositive variance estimate, parameter flagged by NaN.
    }
}

FitResult finish_weibull_fit(const CensoredSample& sample, const char* who) {
    FitResult result;
    result.parameters = {"alpha", "beta"};
    result.n = sample.t.size();
    result.r = sample.events();
    if (result.r < 2) {
        throw FitError(std::string(who) + ": needs at least 2 observed events");
    }
    double alpha_hat;
    try {
        alpha_hat = find_root_expanding(
            [&sample](double a) { return shared_alpha_score(sample, a); });
    } catch (const std::runtime_error& e) {
        throw FitError(std::string(who) +
                       ": no root of the alpha score equation (" + e.what() + ")");
    }
    const double beta_hat = shared_beta_plugin(sample, alpha_hat);
    result.estimates = {alpha_hat, beta_hat};
    result.loglik = weibull_censored_loglik(sample, alpha_hat, beta_hat);
    result.hessian = hessian_fd([&sample](const std::vector<double>& v) {
        return weibull_censored_loglik(sample, v[0], v[1]);
    }, result.estimates);
    result.converged = true;
    apply_intervals(result, 0.05, false);
    return result;
}

} // namespace

double loglik_type_ii(const CensoredSample& sample, double alpha, double beta) {
    return weibull_censored_loglik(sample, alpha, beta);
}

double loglik_type_i(const CensoredSample& sample, double t_c, double alpha,
                     double beta) {
    (void)t_c; // censored entries already carry t_c in t
    return weibull_censored_loglik(sample, alpha, beta);
}

double loglik_random(const CensoredSample& sample, double alpha, double beta) {
    return weibull_censored_loglik(sample, alpha, beta);
}

double alpha_score_type_ii(const CensoredSample& sample, double alpha) {
    return shared_alpha_score(sample, alpha);
}
double beta_plugin_type_ii(const CensoredSample& sample, double alpha) {
    return shared_beta_plugin(sample, alpha);
}
double alpha_score_type_i(const CensoredSample& sample, double t_c, double alpha) {
    (void)t_c;
    return shared_alpha_score(sample, alpha);
}
double beta_plugin_type_i(const CensoredSample& sample, double t_c, double alpha) {
    (void)t_c;
    return shared_beta_plugin(sample, alpha);
}
double alpha_score_random(const CensoredSample& sample, double alpha) {
    return shared_alpha_score(sample, alpha);
}
double beta_plugin_random(const CensoredSample& sample, double alpha) {
    return shared_beta_plugin(sample, alpha);
}

FitResult fit_type_ii(const CensoredSample& sample) {
    check_shape(sample, "fit_type_ii");
    check_event_times(sample, "fit_type_ii");
    // Censored entries must all sit at the largest event time (the stopping
    // order statistic).
    double max_event = -kInf;
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        if (sample.delta[i]) max_event = std::max(max_event, sample.t[i]);
    }
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        if (!sample.delta[i] &&
            std::fabs(sample.t[i] - max_event) >
                1e-9 * std::max(1.0, std::fabs(max_event))) {
            throw FitError(
                "fit_type_ii: censored times must equal the last event time "
                "(row " + std::to_string(i + 1) + ")");
        }
    }
    return finish_weibull_fit(sample, "fit_type_ii");
}

FitResult fit_type_i(const CensoredSample& sample, double t_c) {
    check_shape(sample, "fit_type_i");
    check_event_times(sample, "fit_type_i");
    if (!(t_c > 0.0)) throw FitError("fit_type_i: t_c must be > 0");
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        if (!sample.delta[i] &&
            std::fabs(sample.t[i] - t_c) > 1e-9 * std::max(1.0, t_c)) {
            throw FitError("fit_type_i: censored times must equal t_c (row " +
                           std::to_string(i + 1) + ")");
        }
        if (sample.delta[i] && sample.t[i] > t_c) {
            throw FitError("fit_type_i: event time beyond t_c (row " +
                           std::to_string(i + 1) + ")");
        }
    }
    return finish_weibull_fit(sample, "fit_type_i");
}

FitResult fit_random(const CensoredSample& sample) {
    check_shape(sample, "fit_random");
    check_event_times(sample, "fit_random");
    return finish_weibull_fit(sample, "fit_random");
}

double loglik_cure(const CensoredSample& sample, double alpha, double beta,
                   double p) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(p >= 0.0) || !(p < 1.0)) {
        return -kInf;
    }
    double value = 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        const double t = sample.t[i];
        if (sample.delta[i]) {
            if (!(t > 0.0)) return -kInf;
            r += 1.0;
            value += (alpha - 1.0) * std::log(t) - beta * std::pow(t, alpha);
        } else {
            const double surv =
                p + (1.0 - p) * std::exp(-beta * std::pow(t, alpha));
            if (!(surv > 0.0)) return -kInf;
            value += std::log(surv);
        }
    }
    value += r * (std::log(alpha) + std::log(beta) + std::log1p(-p));
    return std::isfinite(value) ? value : -kInf;
}

FitResult fit_cure_random(const CensoredSample& sample) {
    check_shape(sample, "fit_cure_random");
    const FitResult base = fit_random(sample);
    const double p0 = std::clamp(base.censored_fraction(), 1e-6, 1.0 - 1e-6);
    return fit_cure_random(sample,
                           {base.estimates[0], base.estimates[1], p0});
}

FitResult fit_cure_random(const CensoredSample& sample,
                          std::array<double, 3> init) {
    check_shape(sample, "fit_cure_random");
    check_event_times(sample, "fit_cure_random");
    FitResult result;
    result.parameters = {"alpha", "beta", "p"};
    result.n = sample.t.size();
    result.r = sample.events();
    if (result.r < 3) {
        throw FitError("fit_cure_random: needs at least 3 observed events");
    }
    if (!(init[0] > 0.0) || !(init[1] > 0.0) || !(init[2] >= 0.0) ||
        !(init[2] < 1.0)) {
        throw FitError("fit_cure_random: init must satisfy alpha,beta > 0 and "
                       "0 <= p < 1");
    }
    auto objective = [&sample](const std::vector<double>& v) {
        return loglik_cure(sample, v[0], v[1], v[2]);
    };
    const OptimResult opt =
        maximize(objective, {init[0], init[1], init[2]}, {0.0, 0.0, 0.0},
                 {kInf, kInf, 1.0});
    result.estimates = opt.argmax;
    result.loglik = opt.value;
    result.converged = opt.converged;
    result.hessian = hessian_fd(objective, result.estimates);
    apply_intervals(result, 0.05, false);
    return result;
}

double loglik_plc(const std::vector<double>& x, double x_min, double alpha,
                  double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(x_min > 0.0)) return -kInf;
    const double n = static_cast<double>(x.size());
    double sum_log = 0.0, sum = 0.0;
    for (double v : x) {
        sum_log += std::log(v);
        sum += v;
    }
    double norm;
    try {
        norm = upper_incomplete_gamma(1.0 - alpha, beta * x_min);
    } catch (const std::exception&) {
        return -kInf;
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) return -kInf;
    const double value = n * (1.0 - alpha) * std::log(beta) - alpha * sum_log -
                         beta * sum - n * std::log(norm);
    return std::isfinite(value) ? value : -kInf;
}

FitResult fit_plc(const std::vector<double>& x, double x_min,
                  std::array<double, 2> init) {
    if (!(x_min > 0.0)) throw FitError("fit_plc: x_min must be > 0");
    if (x.size() < 3) throw FitError("fit_plc: needs at least 3 observations");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= x_min)) {
            throw FitError("fit_plc: observation below x_min at row " +
                           std::to_string(i + 1));
        }
    }
    FitResult result;
    result.parameters = {"alpha", "beta"};
    result.n = x.size();
    result.r = x.size(); // complete sample: every observation is an event

    // Hoist the sufficient statistics; each objective call is then O(1).
    const double n = static_cast<double>(x.size());
    double sum_log = 0.0, sum = 0.0;
    for (double v : x) {
        sum_log += std::log(v);
        sum += v;
    }
    auto objective = [n, sum_log, sum, x_min](const std::vector<double>& v) {
        const double alpha = v[0], beta = v[1];
        if (!(alpha > 0.0) || !(beta > 0.0)) return -kInf;
        double norm;
        try {
            norm = upper_incomplete_gamma(1.0 - alpha, beta * x_min);
        } catch (const std::exception&) {
            return -kInf;
        }
        if (!(norm > 0.0) || !std::isfinite(norm)) return -kInf;
        const double value = n * (1.0 - alpha) * std::log(beta) -
                             alpha * sum_log - beta * sum - n * std::log(norm);
        return std::isfinite(value) ? value : -kInf;
    };
    const OptimResult opt = maximize(objective, {init[0], init[1]}, {0.0, 0.0},
                                     {kInf, kInf});
    result.estimates = opt.argmax;
    result.loglik = opt.value;
    result.converged = opt.converged;
    result.hessian = hessian_fd(objective, result.estimates);
    apply_intervals(result, 0.05, false);
    return result;
}

std::pair<double, double> wald_interval(double estimate, double std_error,
                                        double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) {
        throw std::domain_error("wald_interval: xi must be in (0, 1]");
    }
    const double z = normal_quantile(1.0 - xi / 2.0);
    return {estimate - z * std_error, estimate + z * std_error};
}

FitResult confidence_intervals(FitResult result, double xi) {
    if (!(xi > 0.0 && xi <= 1.0)) {
        throw std::domain_error("confidence_intervals: xi must be in (0, 1]");
    }
    apply_intervals(result, xi, true);
    return result;
}

std::string fit_result_json(const FitResult& result) {
    nlohmann::json estimates = nlohmann::json::object();
    for (std::size_t i = 0; i < result.parameters.size(); ++i) {
        estimates[result.parameters[i]] = result.estimates[i];
    }
    nlohmann::json j{
        {"parameters", result.parameters},
        {"estimates", estimates},
        {"std_errors", result.std_errors},
        {"ci",
         {{"level", result.ci_level},
          {"lower", result.ci_lower},
          {"upper", result.ci_upper}}},
        {"loglik", result.loglik},
        {"converged", result.converged},
        {"n", result.n},
        {"r", result.r},
        {"censored_fraction", result.censored_fraction()},
    };
    return j.dump(2);
}

} // namespace censim
