#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "censim/distributions.hpp"
#include "censim/rng.hpp"

namespace censim {

// Right-censored sample: observed time t and event indicator delta
// (1 = event observed, 0 = censored).
struct CensoredSample {
    std::vector<double> t;
    std::vector<int> delta;

    std::size_t size() const { return t.size(); }
    std::size_t events() const {
        std::size_t r = 0;
        for (int d : delta) r += (d != 0);
        return r;
    }
};

struct TypeICensoring { double t_c; };
struct TypeIICensoring { std::size_t m; };
struct RandomCensoring { double lambda; };
struct CureCensoring { double p; double lambda; };
using CensoringScheme =
    std::variant<TypeICensoring, TypeIICensoring, RandomCensoring, CureCensoring>;

// Cure-model draw with generation-time ground truth attached. Cured subjects
// have an infinite latent lifetime (flagged, never stored as a number; the
// latent slot holds NaN) and are always censored.
struct CureSampleTruth {
    CensoredSample censored;
    std::vector<int> cured_flags;
    std::vector<double> latent; // pre-censoring lifetime; NaN when cured
};

// Sentinel written for cured subjects ONLY in raw latent-lifetime CSV dumps,
// where an infinity marker needs a numeric stand-in.
constexpr double kCuredSentinel = 1e54;

// Type-II: observation stops at the (n-m)-th failure; the sample is sorted
// and the last m entries are censored at that failure time. Requires
// 0 <= m < n.
CensoredSample apply_type_ii(std::vector<double> x, std::size_t m);

// Type-I: t = min(x, t_c), event iff x < t_c.
CensoredSample apply_type_i(const std::vector<double>& x, double t_c);

// Random censoring with C ~ U(0, lambda): t = min(x, c), event iff x <= c.
CensoredSample apply_random(RngStream& rng, const std::vector<double>& x,
                            double lambda);

// Cure-model sample of size n under U(0, lambda) random censoring. Draw
// order per subject: cure Bernoulli, latent lifetime uniform (drawn and
// discarded for cured subjects), censoring uniform.
CureSampleTruth sample_cure(RngStream& rng, const MixtureCureParams& params,
                            double lambda, std::size_t n);

// Fixed censoring time giving P(X > t_c) = pi exactly:
// t_c = ((-log pi) / beta)^(1/alpha).
double calibrate_type_i(const WeibullParams& params, double pi);

// Closed-form lambda = beta^(-1/alpha) Gamma(1/alpha) / (alpha * pi); the
// resulting expected censored fraction is E[min(X, lambda)]/lambda <= pi.
double calibrate_random_analytic(const WeibullParams& params, double pi);

// Expected censored fraction P(C < X) under C ~ U(0, lambda):
// E[min(X, lambda)]/lambda, in closed form via the lower incomplete gamma.
double censored_fraction_random(const WeibullParams& params, double lambda);

// Expected censored fraction for a cure-model sample:
// p + (1-p) * censored_fraction_random(base, lambda).
double censored_fraction_cure(const MixtureCureParams& params, double lambda);

// Solves censored_fraction_random(params, lambda) = pi to 1e-6.
double calibrate_random_exact(const WeibullParams& params, double pi);

// Any sampler usable by the stochastic grid search: draws a censored sample
// of size n at censoring scale lambda.
using GridSampler =
    std::function<CensoredSample(RngStream& rng, double lambda, std::size_t n)>;

// Stochastic grid search: starting at lambda0, increase lambda by epsilon
// until the empirical censored fraction of a fresh sample drops to <= target.
// Each step consumes new randomness from the stream, so the returned lambda
// varies by O(epsilon + sampling noise) across seeds. Throws CalibrationError
// after 10^6 steps (e.g. a cure-model target below the cure fraction).
double calibrate_grid(RngStream& rng, const GridSampler& sampler, double target,
                      double lambda0, double epsilon = 0.01,
                      std::size_t n = 10000);

// Deterministic variant for tests: same stepping rule, but the empirical
// fraction is replaced by an exact fraction oracle.
double calibrate_grid_deterministic(const std::function<double(double)>& fraction,
                                    double target, double lambda0,
                                    double epsilon = 0.01);

} // namespace censim
