#pragma once

#include "censim/rng.hpp"

namespace censim {

// Standard normal CDF, accurate over the full double range (erfc-based).
double normal_cdf(double x);

// log of the standard normal density.
double normal_logpdf(double x);

// log(1 - Phi(x)); switches to an asymptotic expansion deep in the tail
// where erfc would underflow.
double normal_log_sf(double x);

// Standard normal quantile. Requires 0 < p < 1.
double normal_quantile(double p);

// Standard normal draw (inverse-CDF method; fully determined by the stream).
double sample_normal(RngStream& rng);

// log-density of a N(mean, sd^2) truncated to [lower, inf). Returns -inf for
// x < lower.
double trunc_normal_logpdf(double x, double mean, double sd, double lower);

// Draw from N(mean, sd^2) conditioned on the result being >= lower.
// Exact for any position of the truncation point: plain rejection when the
// bound is deep in the left tail, inverse-CDF on the conditioned tail for
// moderate bounds, and exponential tilting when the bound is far right.
double sample_trunc_normal(RngStream& rng, double mean, double sd, double lower);

} // namespace censim
