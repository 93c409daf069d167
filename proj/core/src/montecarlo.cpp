#include "censim/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "censim/errors.hpp"

namespace censim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kChunk = 64; // replications per deterministic work unit

struct ParamAccum {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t covered = 0;
};

// Chunk-local accumulator for one scheme (merged in chunk order afterwards,
// which keeps floating-point totals independent of the thread count).
struct SchemeAccum {
    std::vector<ParamAccum> params;
    std::size_t used = 0;
    std::size_t failed = 0;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CENSIM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void validate_config(const McConfig& config) {
    if (config.replications < 1) throw McError("run_study: replications must be >= 1");
    if (config.n_grid.empty()) throw McError("run_study: n_grid must be nonempty");
    if (!(config.level > 0.0 && config.level < 1.0)) {
        throw McError("run_study: level must be in (0, 1)");
    }
    if (!(config.true_params.alpha > 0.0 && config.true_params.beta > 0.0)) {
        throw McError("run_study: true parameters must be positive");
    }
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, McTypeI>) {
                if (!(s.t_c > 0.0)) throw McError("run_study: t_c must be > 0");
            } else if constexpr (std::is_same_v<T, McTypeII>) {
                if (!(s.censored_frac >= 0.0 && s.censored_frac < 1.0)) {
                    throw McError("run_study: censored_frac must be in [0, 1)");
                }
            } else if constexpr (std::is_same_v<T, McRandom>) {
                if (!(s.lambda > 0.0)) throw McError("run_study: lambda must be > 0");
            } else {
                if (!(s.p >= 0.0 && s.p < 1.0) || !(s.lambda > 0.0)) {
                    throw McError("run_study: cure scheme needs 0 <= p < 1, lambda > 0");
                }
            }
        },
        config.scheme);
}

std::vector<std::string> scheme_param_names(const McScheme& scheme) {
    if (std::holds_alternative<McCure>(scheme)) return {"alpha", "beta", "p"};
    return {"alpha", "beta"};
}

std::size_t type_ii_m(double frac, std::size_t n) {
    const auto m = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
    return m >= n ? n - 1 : m;
}

FitResult default_fit(const McScheme& scheme, const CensoredSample& sample) {
    if (const auto* t1 = std::get_if<McTypeI>(&scheme)) {
        return fit_type_i(sample, t1->t_c);
    }
    if (std::holds_alternative<McTypeII>(scheme)) return fit_type_ii(sample);
    if (std::holds_alternative<McRandom>(scheme)) return fit_random(sample);
    return fit_cure_random(sample);
}

// One replication's contribution for one scheme. Returns false when the
// replication must be excluded (fit failure, non-convergence, or unusable
// intervals).
bool accumulate_fit(const McScheme& scheme, const CensoredSample& sample,
                    const McFitter* fitter, double level,
                    const std::vector<double>& truth, SchemeAccum& acc,
                    std::vector<double>* estimate_row) {
    FitResult fit;
    try {
        fit = fitter ? (*fitter)(sample) : default_fit(scheme, sample);
        if (!fit.converged) return false;
        if (std::fabs(level - fit.ci_level) > 1e-12) {
            fit = confidence_intervals(std::move(fit), 1.0 - level);
        }
    } catch (const FitError&) {
        return false;
    } catch (const std::runtime_error&) {
        return false;
    }
    if (fit.estimates.size() != truth.size()) {
        throw McError("run_study: fitter returned " +
                      std::to_string(fit.estimates.size()) + " estimates, expected " +
                      std::to_string(truth.size()));
    }
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (std::isnan(fit.estimates[k]) || std::isnan(fit.ci_lower[k]) ||
            std::isnan(fit.ci_upper[k])) {
            return false;
        }
    }
    for (std::size_t k = 0; k < truth.size(); ++k) {
        acc.params[k].sum += fit.estimates[k];
        acc.params[k].sum_sq += fit.estimates[k] * fit.estimates[k];
        // Strict containment: zero-width intervals never cover.
        if (fit.ci_lower[k] < truth[k] && truth[k] < fit.ci_upper[k]) {
            ++acc.params[k].covered;
        }
        if (estimate_row) (*estimate_row)[k] = fit.estimates[k];
    }
    ++acc.used;
    return true;
}

struct CellPlan {
    std::size_t n;
    std::size_t cell_index; // substream high word
};

// Runs all replications of one cell for `schemes.size()` schemes that share
// the complete sample, merging chunk results in index order.
std::vector<SchemeAccum> run_cell(const McConfig& config,
                                  const std::vector<McScheme>& schemes,
                                  const CellPlan& plan, const McFitter* fitter,
                                  const std::vector<double>& truth,
                                  std::vector<std::vector<std::vector<double>>>* store) {
    const std::size_t reps = config.replications;
    const std::size_t num_params = truth.size();
    const std::size_t num_chunks = (reps + kChunk - 1) / kChunk;

    std::vector<std::vector<SchemeAccum>> chunk_acc(
        num_chunks, std::vector<SchemeAccum>(schemes.size()));
    for (auto& chunk : chunk_acc) {
        for (auto& acc : chunk) acc.params.resize(num_params);
    }

    std::atomic<std::size_t> next_chunk{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        try {
            for (;;) {
                const std::size_t c = next_chunk.fetch_add(1);
                if (c >= num_chunks) return;
                const std::size_t j_end = std::min(reps, (c + 1) * kChunk);
                for (std::size_t j = c * kChunk; j < j_end; ++j) {
                    RngStream rng = RngStream::substream(
                        config.master_seed,
                        (static_cast<std::uint64_t>(plan.cell_index) << 32) |
                            static_cast<std::uint64_t>(j));
                    // Cure schemes own their whole generation path; the other
                    // schemes share one complete Weibull sample.
                    std::vector<double> complete;
                    CensoredSample cure_sample;
                    if (const auto* cure = std::get_if<McCure>(&schemes[0])) {
                        cure_sample =
                            sample_cure(rng, {cure->p, config.true_params},
                                        cure->lambda, plan.n)
                                .censored;
                    } else {
                        complete = sample_weibull(rng, config.true_params, plan.n);
                    }
                    for (std::size_t s = 0; s < schemes.size(); ++s) {
                        CensoredSample sample;
                        if (std::holds_alternative<McCure>(schemes[s])) {
                            sample = cure_sample;
                        } else if (const auto* t1 = std::get_if<McTypeI>(&schemes[s])) {
                            sample = apply_type_i(complete, t1->t_c);
                        } else if (const auto* t2 = std::get_if<McTypeII>(&schemes[s])) {
                            sample = apply_type_ii(complete,
                                                   type_ii_m(t2->censored_frac, plan.n));
                        } else {
                            const auto& rnd = std::get<McRandom>(schemes[s]);
                            sample = apply_random(rng, complete, rnd.lambda);
                        }
                        std::vector<double>* row = nullptr;
                        if (store) row = &(*store)[s][j];
                        if (!accumulate_fit(schemes[s], sample, fitter,
                                            config.level, truth,
                                            chunk_acc[c][s], row)) {
                            ++chunk_acc[c][s].failed;
                        }
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    const int threads =
        std::min<int>(resolve_threads(config.threads),
                      static_cast<int>(num_chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Deterministic merge in chunk order.
    std::vector<SchemeAccum> total(schemes.size());
    for (auto& acc : total) acc.params.resize(num_params);
    for (const auto& chunk : chunk_acc) {
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            total[s].used += chunk[s].used;
            total[s].failed += chunk[s].failed;
            for (std::size_t k = 0; k < num_params; ++k) {
                total[s].params[k].sum += chunk[s].params[k].sum;
                total[s].params[k].sum_sq += chunk[s].params[k].sum_sq;
                total[s].params[k].covered += chunk[s].params[k].covered;
            }
        }
    }
    return total;
}

McCell make_cell(std::size_t n, const std::string& parameter, double truth,
                 const ParamAccum& acc, std::size_t used, std::size_t failed) {
    McCell cell;
    cell.n = n;
    cell.parameter = parameter;
    cell.truth = truth;
    cell.failed = failed;
    cell.used = used;
    cell.sum = acc.sum;
    cell.sum_sq = acc.sum_sq;
    cell.covered = acc.covered;
    if (used > 0) {
        const double mean = acc.sum / static_cast<double>(used);
        cell.bias = mean - truth;
        cell.mse = acc.sum_sq / static_cast<double>(used) - 2.0 * truth * mean +
                   truth * truth;
        cell.cp = static_cast<double>(acc.covered) / static_cast<double>(used);
    } else {
        cell.bias = kNaN;
        cell.mse = kNaN;
        cell.cp = kNaN;
    }
    return cell;
}

std::vector<McReport> run_schemes(const McConfig& config,
                                  const std::vector<McScheme>& schemes,
                                  const McFitter* fitter) {
    validate_config(config);
    const std::vector<std::string> names = scheme_param_names(schemes[0]);
    std::vector<double> truth = {config.true_params.alpha,
                                 config.true_params.beta};
    if (const auto* cure = std::get_if<McCure>(&schemes[0])) {
        truth.push_back(cure->p);
    }

    std::vector<McReport> reports(schemes.size());
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        reports[s].scheme = scheme_name(schemes[s]);
    }

    for (std::size_t cell_index = 0; cell_index < config.n_grid.size();
         ++cell_index) {
        const CellPlan plan{config.n_grid[cell_index], cell_index};

        std::vector<std::vector<std::vector<double>>> store;
        std::vector<std::vector<std::vector<double>>>* store_ptr = nullptr;
        if (config.store_estimates) {
            store.assign(schemes.size(),
                         std::vector<std::vector<double>>(
                             config.replications,
                             std::vector<double>(truth.size(), kNaN)));
            store_ptr = &store;
        }

        const std::vector<SchemeAccum> totals =
            run_cell(config, schemes, plan, fitter, truth, store_ptr);

        for (std::size_t s = 0; s < schemes.size(); ++s) {
            const SchemeAccum& acc = totals[s];
            if (10 * acc.failed > config.replications) {
                throw McError("run_study: scheme " + reports[s].scheme + ", n=" +
                              std::to_string(plan.n) + ": " +
                              std::to_string(acc.failed) + " of " +
                              std::to_string(config.replications) +
                              " replications failed to fit (>10%)");
            }
            for (std::size_t k = 0; k < truth.size(); ++k) {
                McCell cell = make_cell(plan.n, names[k], truth[k],
                                        acc.params[k], acc.used, acc.failed);
                if (config.store_estimates) {
                    cell.estimates.reserve(config.replications);
                    for (const auto& row : store[s]) {
                        cell.estimates.push_back(row[k]);
                    }
                }
                reports[s].cells.push_back(std::move(cell));
            }
        }
    }
    return reports;
}

} // namespace

std::string scheme_name(const McScheme& scheme) {
    if (std::holds_alternative<McTypeI>(scheme)) return "type1";
    if (std::holds_alternative<McTypeII>(scheme)) return "type2";
    if (std::holds_alternative<McRandom>(scheme)) return "random";
    return "cure";
}

McReport run_study(const McConfig& config) {
    return run_schemes(config, {config.scheme}, nullptr)[0];
}

McReport run_study(const McConfig& config, const McFitter& fitter) {
    return run_schemes(config, {config.scheme}, &fitter)[0];
}

std::array<McReport, 3> shared_complete_sample_mode(const McConfig& config,
                                                    double pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw McError("shared_complete_sample_mode: pi must be in (0, 1)");
    }
    McConfig cfg = config;
    // Calibrate each scheme to the same expected censored fraction.
    const double t_c = calibrate_type_i(config.true_params, pi);
    const double lambda = calibrate_random_exact(config.true_params, pi);
    const std::vector<McScheme> schemes = {McTypeI{t_c}, McTypeII{pi},
                                           McRandom{lambda}};
    cfg.scheme = schemes[0]; // parameter names/truth layout
    auto reports = run_schemes(cfg, schemes, nullptr);
    return {std::move(reports[0]), std::move(reports[1]), std::move(reports[2])};
}

McReport cure_study(const McConfig& config) {
    if (!std::holds_alternative<McCure>(config.scheme)) {
        throw McError("cure_study: config.scheme must be a cure scheme");
    }
    return run_study(config);
}

std::string report_csv(const std::vector<McReport>& reports) {
    std::string out = "scheme,n,parameter,bias,mse,cp,failed\n";
    char buf[128];
    for (const auto& report : reports) {
        for (const auto& cell : report.cells) {
            std::snprintf(buf, sizeof(buf), "%s,%zu,%s,%.17g,%.17g,%.17g,%zu\n",
                          report.scheme.c_str(), cell.n, cell.parameter.c_str(),
                          cell.bias, cell.mse, cell.cp, cell.failed);
            out += buf;
        }
    }
    return out;
}

std::string report_json(const std::vector<McReport>& reports) {
    nlohmann::json jreports = nlohmann::json::array();
    for (const auto& report : reports) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& cell : report.cells) {
            cells.push_back({{"n", cell.n},
                             {"parameter", cell.parameter},
                             {"truth", cell.truth},
                             {"bias", cell.bias},
                             {"mse", cell.mse},
                             {"cp", cell.cp},
                             {"failed", cell.failed},
                             {"used", cell.used}});
        }
        jreports.push_back({{"scheme", report.scheme}, {"cells", cells}});
    }
    return nlohmann::json{{"reports", jreports}}.dump(2);
}

} // namespace censim
