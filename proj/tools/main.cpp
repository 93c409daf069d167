// censim command-line tool: sample generation, censoring calibration,
// maximum-likelihood fitting, and Monte Carlo studies.
//
// Exit codes: 0 ok, 1 numerical failure, 2 flag/input validation,
// 3 fit did not converge (result still printed).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "censim/censoring.hpp"
#include "censim/distributions.hpp"
#include "censim/errors.hpp"
#include "censim/estimation.hpp"
#include "censim/io.hpp"
#include "censim/montecarlo.hpp"
#include "censim/rng.hpp"
#include "censim/sampling.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        censim::atomic_write_file(out_path, content);
    }
}

struct SampleArgs {
    std::string dist;
    double alpha = 0.0, beta = 0.0;
    double alpha2 = 0.0, beta2 = 0.0, p1 = 0.0;
    double xmin = 1.0;
    double cure_p = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string censoring = "none";
    double tc = 0.0, lambda = 0.0;
    long long m = -1;
    int burnin = 1000, thin = 50;
    double proposal_sd = 0.5;
    std::string out_path, raw_latent_path;
    bool has_tc = false, has_lambda = false, has_cure_p = false;
    bool has_mixture_flags = false;
};

int run_sample(const SampleArgs& a) {
    std::cerr << "seed: " << a.seed << "\n";
    censim::RngStream rng(a.seed);

    if (a.dist == "cure") {
        if (!a.has_cure_p) {
            std::cerr << "sample: --cure-p is required with --dist cure\n";
            return 2;
        }
        if (!a.has_lambda) {
            std::cerr << "sample: --lambda is required with --dist cure\n";
            return 2;
        }
        if (a.censoring != "none") {
            std::cerr << "sample: --censoring cannot be combined with --dist cure "
                         "(cure sampling censors internally)\n";
            return 2;
        }
        const censim::MixtureCureParams params{a.cure_p, {a.alpha, a.beta}};
        const censim::CureSampleTruth truth =
            censim::sample_cure(rng, params, a.lambda, a.n);
        if (!a.raw_latent_path.empty()) {
            censim::atomic_write_file(
                a.raw_latent_path,
                censim::latent_csv(truth.latent, truth.cured_flags));
        }
        const double frac = 1.0 - static_cast<double>(truth.censored.events()) /
                                      static_cast<double>(a.n);
        std::fprintf(stderr, "censored fraction: %.6g\n", frac);
        emit(censim::censored_csv(truth.censored), a.out_path);
        return 0;
    }
    if (!a.raw_latent_path.empty()) {
        std::cerr << "sample: --raw-latent only applies to --dist cure\n";
        return 2;
    }

    std::vector<double> values;
    if (a.dist == "weibull") {
        values = censim::sample_weibull(rng, {a.alpha, a.beta}, a.n);
    } else if (a.dist == "mixture") {
        if (!a.has_mixture_flags) {
            std::cerr << "sample: --dist mixture requires --alpha2, --beta2 "
                         "and --p1\n";
            return 2;
        }
        const censim::MixtureParams params{
            {a.p1, 1.0 - a.p1}, {{a.alpha, a.beta}, {a.alpha2, a.beta2}}};
        values = censim::sample_mixture(rng, params, a.n).values;
    } else { // plc
        const censim::PlcParams params{a.alpha, a.beta, a.xmin};
        const censim::MhConfig mh{a.burnin, a.thin, a.proposal_sd,
                                  std::numeric_limits<double>::quiet_NaN()};
        values = censim::sample_plc_mh(rng, params, a.n, mh).first;
    }

    censim::CensoredSample sample;
    if (a.censoring == "none") {
        std::fprintf(stderr, "censored fraction: 0\n");
        emit(censim::values_csv(values), a.out_path);
        return 0;
    }
    if (a.censoring == "type1") {
        if (!a.has_tc) {
            std::cerr << "sample: --tc is required with --censoring type1\n";
            return 2;
        }
        sample = censim::apply_type_i(values, a.tc);
    } else if (a.censoring == "type2") {
        if (a.m < 0) {
            std::cerr << "sample: --m is required with --censoring type2\n";
            return 2;
        }
        if (static_cast<std::size_t>(a.m) >= a.n) {
            std::cerr << "sample: --m must be < --n\n";
            return 2;
        }
        sample = censim::apply_type_ii(values, static_cast<std::size_t>(a.m));
    } else { // random
        if (!a.has_lambda) {
            std::cerr << "sample: --lambda is required with --censoring random\n";
            return 2;
        }
        sample = censim::apply_random(rng, values, a.lambda);
    }
    const double frac = 1.0 - static_cast<double>(sample.events()) /
                                  static_cast<double>(sample.size());
    std::fprintf(stderr, "censored fraction: %.6g\n", frac);
    emit(censim::censored_csv(sample), a.out_path);
    return 0;
}

struct CalibrateArgs {
    std::string scheme;
    double pi = 0.0;
    double alpha = 0.0, beta = 0.0;
    double cure_p = 0.0;
    bool has_cure_p = false;
    double epsilon = 0.01;
    std::size_t grid_n = 10000;
    double lambda0 = 0.0; // 0 = pilot-sample default
    std::uint64_t seed = 0;
};

int run_calibrate(const CalibrateArgs& a) {
    const censim::WeibullParams base{a.alpha, a.beta};
    double value = 0.0;
    if (a.scheme == "type1") {
        value = censim::calibrate_type_i(base, a.pi);
    } else if (a.scheme == "random") {
        value = censim::calibrate_random_analytic(base, a.pi);
    } else if (a.scheme == "random-exact") {
        value = censim::calibrate_random_exact(base, a.pi);
    } else { // cure-grid
        if (!a.has_cure_p) {
            std::cerr << "calibrate: --cure-p is required with --scheme cure-grid\n";
            return 2;
        }
        std::cerr << "seed: " << a.seed << "\n";
        censim::RngStream rng(a.seed);
        double lambda0 = a.lambda0;
        if (lambda0 <= 0.0) {
            // Default start: smallest lifetime in a pilot sample.
            const auto pilot = censim::sample_weibull(rng, base, a.grid_n);
            lambda0 = std::max(
                *std::min_element(pilot.begin(), pilot.end()), a.epsilon);
        }
        const censim::MixtureCureParams params{a.cure_p, base};
        censim::GridSampler sampler = [&params](censim::RngStream& r,
                                                double lambda, std::size_t n) {
            return censim::sample_cure(r, params, lambda, n).censored;
        };
        value = censim::calibrate_grid(rng, sampler, a.pi, lambda0, a.epsilon,
                                       a.grid_n);
    }
    std::printf("%.6g\n", value);
    return 0;
}

struct FitArgs {
    std::string scheme;
    std::string in_path;
    double tc = 0.0;
    bool has_tc = false;
    double xmin = 1.0;
    std::vector<double> init;
};

int run_fit(const FitArgs& a) {
    bool had_delta = false;
    censim::CensoredSample sample;
    try {
        sample = censim::read_censored_csv(a.in_path, &had_delta);
    } catch (const std::runtime_error& e) {
        std::cerr << "fit: " << e.what() << "\n";
        return 2;
    }

    censim::FitResult result;
    if (a.scheme == "plc") {
        for (int d : sample.delta) {
            if (d == 0) {
                std::cerr << "fit: --scheme plc expects complete (uncensored) "
                             "observations\n";
                return 2;
            }
        }
        if (!a.init.empty() && a.init.size() != 2) {
            std::cerr << "fit: --init for plc takes 2 values: alpha,beta\n";
            return 2;
        }
        std::array<double, 2> init;
        if (a.init.size() == 2) {
            init = {a.init[0], a.init[1]};
        } else {
            // Tail-index warm start plus an inverse-mean rate.
            double sum_log = 0.0, sum = 0.0;
            for (double x : sample.t) {
                sum_log += std::log(x / a.xmin);
                sum += x;
            }
            const double n = static_cast<double>(sample.t.size());
            double a0 = sum_log > 0.0 ? 1.0 + n / sum_log : 1.5;
            init = {std::clamp(a0, 0.05, 50.0), n / std::max(sum, 1e-300)};
        }
        result = censim::fit_plc(sample.t, a.xmin, init);
    } else {
        if (!had_delta) {
            std::cerr << "fit: --scheme " << a.scheme
                      << " requires a t,delta CSV (no delta column found)\n";
            return 2;
        }
        if (!a.init.empty() && a.scheme != "cure") {
            std::cerr << "fit: --init only applies to --scheme cure or plc\n";
            return 2;
        }
        if (a.scheme == "type2") {
            result = censim::fit_type_ii(sample);
        } else if (a.scheme == "type1") {
            if (!a.has_tc) {
                std::cerr << "fit: --tc is required with --scheme type1\n";
                return 2;
            }
            result = censim::fit_type_i(sample, a.tc);
        } else if (a.scheme == "random") {
            result = censim::fit_random(sample);
        } else { // cure
            if (!a.init.empty() && a.init.size() != 3) {
                std::cerr << "fit: --init for cure takes 3 values: alpha,beta,p\n";
                return 2;
            }
            if (a.init.size() == 3) {
                result = censim::fit_cure_random(
                    sample, {a.init[0], a.init[1], a.init[2]});
            } else {
                result = censim::fit_cure_random(sample);
            }
        }
    }
    std::cout << censim::fit_result_json(result) << "\n";
    return result.converged ? 0 : 3;
}

struct McArgs {
    std::string config_path;
    std::string scheme;
    double tc = 0.0, frac = 0.0, lambda = 0.0, cure_p = 0.0;
    double alpha = 0.0, beta = 0.0;
    std::vector<std::size_t> n_grid;
    std::size_t reps = 2000;
    double level = 0.95;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = 0;
    double shared_pi = 0.0;
    bool has_shared_pi = false;
    bool oracle_fitter = false;
    std::string out_prefix;
};

censim::McScheme scheme_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "type1") return censim::McTypeI{j.at("tc").get<double>()};
    if (type == "type2") return censim::McTypeII{j.at("frac").get<double>()};
    if (type == "random") return censim::McRandom{j.at("lambda").get<double>()};
    if (type == "cure") {
        return censim::McCure{j.at("p").get<double>(),
                              j.at("lambda").get<double>()};
    }
    throw nlohmann::json::other_error::create(
        501, "unknown scheme type '" + type + "'", nullptr);
}

int run_mc(McArgs& a) {
    censim::McConfig config;
    bool config_has_shared_pi = a.has_shared_pi;
    double shared_pi = a.shared_pi;
    bool scheme_set = false;

    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) {
            std::cerr << "mc: cannot open config file: " << a.config_path << "\n";
            return 2;
        }
        nlohmann::json j;
        try {
            in >> j;
            config.true_params.alpha = j.at("true_params").at("alpha").get<double>();
            config.true_params.beta = j.at("true_params").at("beta").get<double>();
            config.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
            if (j.contains("replications")) {
                config.replications = j["replications"].get<std::size_t>();
            }
            if (j.contains("level")) config.level = j["level"].get<double>();
            if (j.contains("master_seed")) {
                config.master_seed = j["master_seed"].get<std::uint64_t>();
                if (!a.has_seed) a.has_seed = true, a.seed = config.master_seed;
            }
            if (j.contains("threads")) config.threads = j["threads"].get<int>();
            if (j.contains("shared_pi")) {
                config_has_shared_pi = true;
                shared_pi = j["shared_pi"].get<double>();
            } else {
                config.scheme = scheme_from_json(j.at("scheme"));
                scheme_set = true;
            }
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "mc: invalid config: " << e.what() << "\n";
            return 2;
        }
    } else {
        config.true_params = {a.alpha, a.beta};
        config.n_grid = a.n_grid;
        config.replications = a.reps;
        config.level = a.level;
        config.threads = a.threads;
        if (!config_has_shared_pi) {
            if (a.scheme == "type1") {
                config.scheme = censim::McTypeI{a.tc};
            } else if (a.scheme == "type2") {
                config.scheme = censim::McTypeII{a.frac};
            } else if (a.scheme == "random") {
                config.scheme = censim::McRandom{a.lambda};
            } else if (a.scheme == "cure") {
                config.scheme = censim::McCure{a.cure_p, a.lambda};
            } else {
                std::cerr << "mc: --scheme or --shared-pi (or --config) is "
                             "required\n";
                return 2;
            }
            scheme_set = true;
        }
    }
    if (a.threads > 0) config.threads = a.threads;
    if (!a.has_seed) a.seed = entropy_seed();
    config.master_seed = a.seed;
    std::cerr << "seed: " << config.master_seed << "\n";

    if (config_has_shared_pi && a.oracle_fitter) {
        std::cerr << "mc: --oracle-fitter cannot be combined with shared-sample "
                     "mode\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    std::vector<censim::McReport> reports;
    if (config_has_shared_pi) {
        auto shared = censim::shared_complete_sample_mode(config, shared_pi);
        reports.assign(shared.begin(), shared.end());
    } else if (a.oracle_fitter) {
        // Test hook: a fitter that returns the truth with infinite intervals,
        // so bias/mse are exactly zero and coverage is exactly one.
        std::vector<double> truth = {config.true_params.alpha,
                                     config.true_params.beta};
        std::vector<std::string> names = {"alpha", "beta"};
        if (const auto* cure = std::get_if<censim::McCure>(&config.scheme)) {
            truth.push_back(cure->p);
            names.emplace_back("p");
        }
        const double level = config.level;
        censim::McFitter oracle =
            [truth, names, level](const censim::CensoredSample& s) {
                censim::FitResult r;
                r.parameters = names;
                r.estimates = truth;
                r.std_errors.assign(truth.size(), 0.0);
                r.ci_level = level;
                r.ci_lower.assign(truth.size(), -kInf);
                r.ci_upper.assign(truth.size(), kInf);
                r.converged = true;
                r.n = s.size();
                r.r = s.events();
                return r;
            };
        reports.push_back(censim::run_study(config, oracle));
    } else {
        (void)scheme_set;
        reports.push_back(censim::run_study(config));
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;

    for (const auto& report : reports) {
        std::size_t failed = 0;
        for (const auto& cell : report.cells) {
            if (cell.parameter == "alpha") failed += cell.failed;
        }
        std::cerr << "scheme " << report.scheme << ": " << failed
                  << " failed fits\n";
    }
    std::fprintf(stderr, "elapsed: %.2f s\n", elapsed.count());

    const std::string csv = censim::report_csv(reports);
    if (a.out_prefix.empty()) {
        std::cout << csv;
    } else {
        censim::atomic_write_file(a.out_prefix + ".csv", csv);
        censim::atomic_write_file(a.out_prefix + ".json",
                                  censim::report_json(reports));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"survival sample simulation, censoring calibration, "
                 "likelihood fitting, and Monte Carlo studies"};
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "draw pseudo-random survival samples");
    sample->add_option("--dist", sa.dist, "distribution")
        ->required()
        ->check(CLI::IsMember({"weibull", "mixture", "plc", "cure"}));
    sample->add_option("--alpha", sa.alpha, "shape")->required();
    sample->add_option("--beta", sa.beta, "rate")->required();
    auto* oa2 = sample->add_option("--alpha2", sa.alpha2, "second component shape");
    auto* ob2 = sample->add_option("--beta2", sa.beta2, "second component rate");
    auto* op1 = sample->add_option("--p1", sa.p1, "first component weight");
    sample->add_option("--xmin", sa.xmin, "power-law support cutoff (default 1)");
    auto* ocp = sample->add_option("--cure-p", sa.cure_p, "cure fraction");
    sample->add_option("--n", sa.n, "sample size")->required()
        ->check(CLI::PositiveNumber);
    auto* oseed = sample->add_option("--seed", sa.seed, "RNG seed (default: OS entropy)");
    sample->add_option("--censoring", sa.censoring, "censoring scheme (default none)")
        ->check(CLI::IsMember({"none", "type1", "type2", "random"}));
    auto* otc = sample->add_option("--tc", sa.tc, "fixed censoring time");
    sample->add_option("--m", sa.m, "number censored (type2)");
    auto* olam = sample->add_option("--lambda", sa.lambda, "uniform censoring scale");
    sample->add_option("--burnin", sa.burnin, "MH burn-in (plc)");
    sample->add_option("--thin", sa.thin, "MH thinning stride (plc)");
    sample->add_option("--proposal-sd", sa.proposal_sd, "MH proposal scale (plc)");
    sample->add_option("--out", sa.out_path, "write CSV here instead of stdout");
    sample->add_option("--raw-latent", sa.raw_latent_path,
                       "also dump latent lifetimes (cure only)");

    CalibrateArgs ca;
    auto* calibrate =
        app.add_subcommand("calibrate", "censoring level for a target censored fraction");
    calibrate->add_option("--scheme", ca.scheme, "calibration target")
        ->required()
        ->check(CLI::IsMember({"type1", "random", "random-exact", "cure-grid"}));
    calibrate->add_option("--pi", ca.pi, "target censored fraction")->required();
    calibrate->add_option("--alpha", ca.alpha, "shape")->required();
    calibrate->add_option("--beta", ca.beta, "rate")->required();
    auto* ccp = calibrate->add_option("--cure-p", ca.cure_p, "cure fraction (cure-grid)");
    calibrate->add_option("--epsilon", ca.epsilon, "grid step (cure-grid)");
    calibrate->add_option("--grid-n", ca.grid_n, "draws per grid step (cure-grid)");
    calibrate->add_option("--lambda0", ca.lambda0,
                          "grid start (default: pilot sample minimum)");
    auto* cseed = calibrate->add_option("--seed", ca.seed,
                                        "RNG seed (default: OS entropy)");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of a censored sample");
    fit->add_option("--scheme", fa.scheme, "censoring scheme of the data")
        ->required()
        ->check(CLI::IsMember({"type1", "type2", "random", "cure", "plc"}));
    fit->add_option("--in", fa.in_path, "input CSV")->required();
    auto* ftc = fit->add_option("--tc", fa.tc, "fixed censoring time (type1)");
    fit->add_option("--xmin", fa.xmin, "power-law support cutoff (plc, default 1)");
    fit->add_option("--init", fa.init, "starting point a,b[,p]")->delimiter(',');

    McArgs ma;
    auto* mc = app.add_subcommand("mc", "Monte Carlo bias/mse/coverage study");
    mc->add_option("--config", ma.config_path, "study config JSON");
    mc->add_option("--scheme", ma.scheme, "censoring scheme")
        ->check(CLI::IsMember({"type1", "type2", "random", "cure"}));
    mc->add_option("--tc", ma.tc, "fixed censoring time (type1)");
    mc->add_option("--frac", ma.frac, "censored fraction (type2)");
    mc->add_option("--lambda", ma.lambda, "uniform censoring scale (random/cure)");
    mc->add_option("--cure-p", ma.cure_p, "cure fraction");
    mc->add_option("--alpha", ma.alpha, "true shape");
    mc->add_option("--beta", ma.beta, "true rate");
    mc->add_option("--n-grid", ma.n_grid, "sample sizes, comma separated")
        ->delimiter(',');
    mc->add_option("--reps", ma.reps, "replications per cell");
    mc->add_option("--level", ma.level, "confidence level");
    auto* mseed = mc->add_option("--seed", ma.seed, "master seed (default: OS entropy)");
    mc->add_option("--threads", ma.threads,
                   "worker threads (default: CENSIM_THREADS or all cores)");
    auto* mpi = mc->add_option("--shared-pi", ma.shared_pi,
                               "run type1+type2+random on one complete sample, "
                               "calibrated to this censored fraction");
    mc->add_flag("--oracle-fitter", ma.oracle_fitter,
                 "test hook: truth-returning fitter");
    mc->add_option("--out-prefix", ma.out_prefix, "write <prefix>.csv and <prefix>.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(sample)) {
            sa.has_tc = otc->count() > 0;
            sa.has_lambda = olam->count() > 0;
            sa.has_cure_p = ocp->count() > 0;
            sa.has_mixture_flags =
                oa2->count() > 0 && ob2->count() > 0 && op1->count() > 0;
            if (oseed->count() == 0) sa.seed = entropy_seed();
            return run_sample(sa);
        }
        if (app.got_subcommand(calibrate)) {
            ca.has_cure_p = ccp->count() > 0;
            if (cseed->count() == 0) ca.seed = entropy_seed();
            return run_calibrate(ca);
        }
        if (app.got_subcommand(fit)) {
            fa.has_tc = ftc->count() > 0;
            return run_fit(fa);
        }
        ma.has_seed = mseed->count() > 0;
        ma.has_shared_pi = mpi->count() > 0;
        return run_mc(ma);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const censim::FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const censim::CalibrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const censim::McError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
