#include "censim/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "censim/normal.hpp"

namespace censim {

std::vector<double> sample_inverse(RngStream& rng,
                                   const std::function<double(double)>& quantile,
                                   std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = quantile(rng.next_double());
    return out;
}

std::vector<double> sample_weibull(RngStream& rng, const WeibullParams& params,
                                   std::size_t n) {
    return sample_inverse(
        rng, [&params](double u) { return weibull_quantile(u, params); }, n);
}

MixtureSample sample_mixture(RngStream& rng, const MixtureParams& params,
                             std::size_t n) {
    // Validate once up front (mixture_cdf checks shape and weight sum).
    mixture_cdf(0.0, params);
    MixtureSample out;
    out.values.resize(n);
    out.labels.resize(n);
    const std::size_t k = params.weights.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.next_double();
        double cum = 0.0;
        std::size_t comp = k - 1;
        for (std::size_t j = 0; j < k; ++j) {
            cum += params.weights[j];
            if (u < cum) {
                comp = j;
                break;
            }
        }
        out.labels[i] = static_cast<int>(comp) + 1;
        out.values[i] = weibull_quantile(rng.next_double(), params.components[comp]);
    }
    return out;
}

std::pair<std::vector<double>, MhDiagnostics> sample_mh(
    RngStream& rng, const std::function<double(double)>& log_target,
    double lower, std::size_t n, const MhConfig& config) {
    if (config.burnin < 0) throw std::invalid_argument("sample_mh: burnin must be >= 0");
    if (config.thin < 1) throw std::invalid_argument("sample_mh: thin must be >= 1");
    if (!(config.proposal_sd > 0.0)) {
        throw std::invalid_argument("sample_mh: proposal_sd must be > 0");
    }
    const double sd = config.proposal_sd;
    double x = std::isnan(config.initial) ? lower + 1.0 : config.initial;
    if (x < lower) throw std::invalid_argument("sample_mh: initial below support");

    double ld_x = log_target(x);
    const long total = static_cast<long>(config.burnin) +
                       static_cast<long>(config.thin) * static_cast<long>(n);
    long accepted = 0;

    std::vector<double> out;
    out.reserve(n);
    for (long step = 1; step <= total; ++step) {
        const double prop = sample_trunc_normal(rng, x, sd, lower);
        const double ld_p = log_target(prop);
        // Proposal normalizers: q(.|y) is N(y, sd^2) truncated to [lower, inf),
        // so the Hastings correction is Z(x)/Z(prop) with Z(y) = Phi((y-lower)/sd).
        const double log_ratio =
            ld_p - ld_x + std::log(normal_cdf((x - lower) / sd)) -
            std::log(normal_cdf((prop - lower) / sd));
        double u;
        do {
            u = rng.next_double();
        } while (u <= 0.0);
        if (std::log(u) < log_ratio) {
            x = prop;
            ld_x = ld_p;
            ++accepted;
        }
        if (step > config.burnin && (step - config.burnin) % config.thin == 0) {
            out.push_back(x);
        }
    }
    MhDiagnostics diag;
    diag.chain_length = total;
    diag.acceptance_rate =
        total > 0 ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
    return {std::move(out), diag};
}

std::pair<std::vector<double>, MhDiagnostics> sample_plc_mh(
    RngStream& rng, const PlcParams& params, std::size_t n,
    const MhConfig& config) {
    // Validates params as a side effect.
    plc_log_unnormalized(params.x_min, params);
    MhConfig cfg = config;
    if (std::isnan(cfg.initial)) cfg.initial = params.x_min + 1.0;
    return sample_mh(
        rng,
        [&params](double x) { return plc_log_unnormalized(x, params); },
        params.x_min, n, cfg);
}

} // namespace censim
