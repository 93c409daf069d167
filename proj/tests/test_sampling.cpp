#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "censim/distributions.hpp"
#include "censim/rng.hpp"
#include "censim/sampling.hpp"
#include "censim/special.hpp"

using namespace censim;

TEST_SUITE_BEGIN("sampling");

namespace {

// one-sample Kolmogorov-Smirnov distance against a cdf
template <typename Cdf>
double ks_distance(std::vector<double> x, Cdf cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = cdf(x[i]);
        d = std::max(d, std::fabs(u - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - u));
    }
    return d;
}

double ks_critical_001(std::size_t n) {
    return 1.6276236307187293 / std::sqrt(static_cast<double>(n));
}

} // namespace

TEST_CASE("inverse-transform sampling matches the target cdf") {
    RngStream rng(31);
    const WeibullParams p{1.5, 2.5};
    const auto x = sample_weibull(rng, p, 10000);
    REQUIRE(x.size() == 10000);
    const double d =
        ks_distance(x, [&p](double v) { return weibull_cdf(v, p); });
    CHECK(d < ks_critical_001(10000));
}

TEST_CASE("identity quantile returns the raw uniforms") {
    RngStream a(5), b(5);
    const auto draws =
        sample_inverse(a, [](double u) { return u; }, 50);
    for (double v : draws) CHECK(v == b.next_double());
}

TEST_CASE("single draw is reproducible") {
    RngStream a(99), b(99);
    const auto x = sample_weibull(a, {1.5, 2.5}, 1);
    const auto y = sample_weibull(b, {1.5, 2.5}, 1);
    REQUIRE(x.size() == 1);
    CHECK(x[0] == y[0]);
}

TEST_CASE("weibull sample moments") {
    RngStream rng(17);
    const WeibullParams p{1.5, 2.5};
    const auto x = sample_weibull(rng, p, 100000);
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / 1e5;

    const double inv_a = 1.0 / p.alpha;
    const double true_mean = std::pow(p.beta, -inv_a) * gamma_fn(1.0 + inv_a);
    const double true_m2 =
        std::pow(p.beta, -2.0 * inv_a) * gamma_fn(1.0 + 2.0 * inv_a);
    const double se = std::sqrt((true_m2 - true_mean * true_mean) / 1e5);
    CHECK(std::fabs(mean - true_mean) < 4.0 * se);
    CHECK(true_mean == doctest::Approx(0.4900855452968288).epsilon(1e-12));
}

TEST_CASE("mixture sampling labels and marginals") {
    // single component: every label is 1
    RngStream rng(23);
    const MixtureParams single{{1.0}, {{1.5, 2.5}}};
    const auto s1 = sample_mixture(rng, single, 1000);
    for (int label : s1.labels) CHECK(label == 1);

    // label frequencies: binomial 3 sigma at n = 1e5
    const MixtureParams p{{0.8, 0.2}, {{5.0, 2.5}, {50.0, 5.0}}};
    RngStream rng2(29);
    const auto s2 = sample_mixture(rng2, p, 100000);
    std::size_t ones = 0;
    for (int label : s2.labels) ones += (label == 1);
    CHECK(std::fabs(static_cast<double>(ones) / 1e5 - 0.8) < 0.004);

    // per-component draws follow the component distribution
    RngStream rng3(37);
    const auto s3 = sample_mixture(rng3, p, 10000);
    std::vector<double> comp1, comp2;
    for (std::size_t i = 0; i < s3.values.size(); ++i) {
        (s3.labels[i] == 1 ? comp1 : comp2).push_back(s3.values[i]);
    }
    const double d1 = ks_distance(
        comp1, [&p](double v) { return weibull_cdf(v, p.components[0]); });
    const double d2 = ks_distance(
        comp2, [&p](double v) { return weibull_cdf(v, p.components[1]); });
    CHECK(d1 < ks_critical_001(comp1.size()));
    CHECK(d2 < ks_critical_001(comp2.size()));
}

TEST_CASE("metropolis-hastings accepts a flat target") {
    RngStream rng(41);
    MhConfig config;
    config.burnin = 0;
    config.thin = 1;
    const auto [draws, diag] = sample_mh(
        rng, [](double) { return 0.0; }, 0.0, 10000, config);
    REQUIRE(draws.size() == 10000);
    CHECK(diag.chain_length == 10000);
    CHECK(diag.acceptance_rate >= 0.99);
    for (double v : draws) CHECK(v >= 0.0);
}

TEST_CASE("plc chain matches its distribution") {
    RngStream rng(101);
    const PlcParams p{1.5, 0.5, 1.0};
    const auto [draws, diag] = sample_plc_mh(rng, p, 10000);
    REQUIRE(draws.size() == 10000);
    CHECK(diag.chain_length == 1000 + 50 * 10000);
    for (double v : draws) REQUIRE(v >= 1.0);

    const double d =
        ks_distance(draws, [&p](double v) { return plc_cdf(v, p); });
    CHECK(d < ks_critical_001(10000));

    // mean within 3 sigma of the quadrature oracle
    double sum = 0.0;
    for (double v : draws) sum += v;
    const double mean = sum / 1e4;
    const double true_mean = 1.9042712333295477;
    const double true_var = 1.1822935365729457;
    CHECK(std::fabs(mean - true_mean) < 3.0 * std::sqrt(true_var / 1e4));

    // thinning leaves essentially uncorrelated draws
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < draws.size(); ++i) {
        num += (draws[i] - mean) * (draws[i + 1] - mean);
    }
    for (double v : draws) den += (v - mean) * (v - mean);
    CHECK(std::fabs(num / den) < 0.1);
}

TEST_CASE("plc chain occupies equal-probability bins uniformly") {
    RngStream rng(202);
    const PlcParams p{1.5, 0.5, 1.0};
    const auto [draws, diag] = sample_plc_mh(rng, p, 100000);
    (void)diag;
    std::vector<std::size_t> counts(20, 0);
    for (double v : draws) {
        auto bin = static_cast<std::size_t>(plc_cdf(v, p) * 20.0);
        if (bin >= 20) bin = 19;
        ++counts[bin];
    }
    const double expected = 1e5 / 20.0;
    double chi2 = 0.0;
    for (std::size_t c : counts) {
        const double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 36.19086912927004); // chi-square(19 df) at 0.99
}

TEST_CASE("samplers are bit-identical under a fixed seed") {
    RngStream a(77), b(77);
    const auto x = sample_plc_mh(a, {1.5, 0.5, 1.0}, 200);
    const auto y = sample_plc_mh(b, {1.5, 0.5, 1.0}, 200);
    REQUIRE(x.first.size() == y.first.size());
    for (std::size_t i = 0; i < x.first.size(); ++i) {
        CHECK(x.first[i] == y.first[i]);
    }
    CHECK(x.second.acceptance_rate == y.second.acceptance_rate);
}

TEST_CASE("mh validates its configuration") {
    RngStream rng(1);
    MhConfig bad;
    bad.thin = 0;
    CHECK_THROWS_AS(
        sample_mh(rng, [](double) { return 0.0; }, 0.0, 10, bad),
        std::invalid_argument);
    MhConfig below;
    below.initial = -1.0;
    CHECK_THROWS_AS(
        sample_mh(rng, [](double) { return 0.0; }, 0.0, 10, below),
        std::invalid_argument);
}

TEST_SUITE_END();
