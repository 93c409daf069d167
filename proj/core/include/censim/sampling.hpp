#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "censim/distributions.hpp"
#include "censim/rng.hpp"

namespace censim {

struct MhConfig {
    int burnin = 1000;
    int thin = 50;
    double proposal_sd = 0.5;
    // Chain start; NaN selects the default (lower support bound + 1).
    double initial = std::numeric_limits<double>::quiet_NaN();
};

struct MhDiagnostics {
    double acceptance_rate = 0.0;
    long chain_length = 0;
};

// n inverse-transform draws through the supplied quantile function.
std::vector<double> sample_inverse(RngStream& rng,
                                   const std::function<double(double)>& quantile,
                                   std::size_t n);

// Convenience: n Weibull draws by inverse transform.
std::vector<double> sample_weibull(RngStream& rng, const WeibullParams& params,
                                   std::size_t n);

struct MixtureSample {
    std::vector<double> values;
    std::vector<int> labels; // 1-based component index
};

// Mixture draws: one uniform picks the component through the cumulative
// weights, a second independent uniform drives the component's inverse
// transform.
MixtureSample sample_mixture(RngStream& rng, const MixtureParams& params,
                             std::size_t n);

// Random-walk Metropolis-Hastings on [lower, inf) with truncated-normal
// proposals, for an arbitrary log target (possibly unnormalized). Runs
// burnin + thin*n steps and keeps every thin-th state after burn-in, so
// exactly n values are returned; a rejected proposal repeats the current
// state. No adaptation of the proposal scale.
std::pair<std::vector<double>, MhDiagnostics> sample_mh(
    RngStream& rng, const std::function<double(double)>& log_target,
    double lower, std::size_t n, const MhConfig& config = {});

// MH sampler for the power law with cutoff.
std::pair<std::vector<double>, MhDiagnostics> sample_plc_mh(
    RngStream& rng, const PlcParams& params, std::size_t n,
    const MhConfig& config = {});

} // namespace censim
