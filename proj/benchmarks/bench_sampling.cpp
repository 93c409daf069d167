#include <benchmark/benchmark.h>

#include "censim/censoring.hpp"
#include "censim/rng.hpp"
#include "censim/sampling.hpp"

namespace {

void BM_WeibullSample(benchmark::State& state) {
    censim::RngStream rng(42);
    const censim::WeibullParams params{1.5, 2.5};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto x = censim::sample_weibull(rng, params, n);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_WeibullSample)->Arg(1000)->Arg(100000);

void BM_RandomCensoring(benchmark::State& state) {
    censim::RngStream rng(42);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = censim::sample_weibull(rng, {1.5, 2.5}, n);
    for (auto _ : state) {
        auto s = censim::apply_random(rng, x, 1.22);
        benchmark::DoNotOptimize(s.t.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_RandomCensoring)->Arg(1000)->Arg(100000);

void BM_CureSample(benchmark::State& state) {
    censim::RngStream rng(42);
    const censim::MixtureCureParams params{0.3, {1.5, 2.5}};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto s = censim::sample_cure(rng, params, 1.22, n);
        benchmark::DoNotOptimize(s.censored.t.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_CureSample)->Arg(1000)->Arg(100000);

void BM_PlcMh(benchmark::State& state) {
    censim::RngStream rng(42);
    const censim::PlcParams params{1.5, 0.5, 1.0};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto draws = censim::sample_plc_mh(rng, params, n);
        benchmark::DoNotOptimize(draws.first.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_PlcMh)->Arg(100)->Arg(1000);

} // namespace
