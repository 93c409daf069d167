#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "censim/censoring.hpp"
#include "censim/distributions.hpp"
#include "censim/estimation.hpp"

namespace censim {

// Scheme descriptors for replicated studies. Type-II is parameterized by the
// censored fraction so the number of censored units scales with n.
struct McTypeI { double t_c; };
struct McTypeII { double censored_frac; };
struct McRandom { double lambda; };
struct McCure { double p; double lambda; };
using McScheme = std::variant<McTypeI, McTypeII, McRandom, McCure>;

std::string scheme_name(const McScheme& scheme);

struct McConfig {
    McScheme scheme;
    WeibullParams true_params; // cure: the susceptible-part Weibull
    std::vector<std::size_t> n_grid;
    std::size_t replications = 2000;
    double level = 0.95; // CI level 1 - xi
    std::uint64_t master_seed = 0;
    int threads = 0;              // 0: CENSIM_THREADS env or hardware count
    bool store_estimates = false; // keep all estimates per cell (debugging)
};

// One (n, parameter) cell of a study report. Raw accumulators are kept so
// mse = bias^2 + variance holds identically by construction.
struct McCell {
    std::size_t n = 0;
    std::string parameter;
    double truth = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double cp = 0.0;
    std::size_t failed = 0; // fit failures (excluded from averages)
    std::size_t used = 0;   // replications entering the averages
    double sum = 0.0;       // sum of estimates
    double sum_sq = 0.0;    // sum of squared estimates
    std::size_t covered = 0;
    std::vector<double> estimates; // populated when store_estimates
};

struct McReport {
    std::string scheme;
    std::vector<McCell> cells; // n_grid-major, parameter-minor order
};

// Replacement fitter for harness tests (e.g. an identity oracle returning
// the truth). Receives the censored sample of the current replication.
using McFitter = std::function<FitResult(const CensoredSample&)>;

// Replicated study: per replication, generate a complete sample with the
// substream (cell_index << 32) | replication, apply the censoring scheme,
// fit, and accumulate bias / MSE / coverage. Coverage counts strict
// containment ci_lower < truth < ci_upper. Replications whose fit throws,
// does not converge, or yields no usable intervals are counted as failed and
// excluded; a cell with more than 10% failures aborts with McError. Reports
// are bit-identical for any thread count.
McReport run_study(const McConfig& config);
McReport run_study(const McConfig& config, const McFitter& fitter);

// Same-complete-sample comparison: per replication one Weibull sample feeds
// the type-I, type-II, and random transforms (in that report order), each
// calibrated to the expected censored fraction pi. config.scheme is ignored.
std::array<McReport, 3> shared_complete_sample_mode(const McConfig& config,
                                                    double pi = 0.4);

// Cure-model study; config.scheme must hold McCure.
McReport cure_study(const McConfig& config);

// CSV rows "scheme,n,parameter,bias,mse,cp,failed" (plot-ready).
std::string report_csv(const std::vector<McReport>& reports);
// JSON rendering of the same cells.
std::string report_json(const std::vector<McReport>& reports);

} // namespace censim
