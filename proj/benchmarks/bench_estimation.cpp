#include <benchmark/benchmark.h>

#include "censim/censoring.hpp"
#include "censim/estimation.hpp"
#include "censim/rng.hpp"
#include "censim/sampling.hpp"
#include "censim/special.hpp"

namespace {

censim::CensoredSample random_sample(std::size_t n) {
    censim::RngStream rng(7);
    const auto x = censim::sample_weibull(rng, {1.5, 2.5}, n);
    return censim::apply_random(rng, x, 1.22);
}

void BM_FitRandom(benchmark::State& state) {
    const auto sample = random_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto fit = censim::fit_random(sample);
        benchmark::DoNotOptimize(fit.estimates.data());
    }
}
BENCHMARK(BM_FitRandom)->Arg(100)->Arg(1000)->Arg(10000);

void BM_FitCure(benchmark::State& state) {
    censim::RngStream rng(7);
    const auto truth = censim::sample_cure(
        rng, {0.3, {1.5, 2.5}}, 1.22, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto fit = censim::fit_cure_random(truth.censored);
        benchmark::DoNotOptimize(fit.estimates.data());
    }
}
BENCHMARK(BM_FitCure)->Arg(100)->Arg(1000);

void BM_UpperIncompleteGamma(benchmark::State& state) {
    // Negative shape exercises the recurrence path used by the power-law
    // normalizer.
    double s = -1.5, x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(censim::upper_incomplete_gamma(s, x));
        x = x < 10.0 ? x * 1.1 : 0.1;
    }
}
BENCHMARK(BM_UpperIncompleteGamma);

} // namespace
