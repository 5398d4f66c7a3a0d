// robscatter: command-line driver for the estimator, its deterministic
// equivalents, the Monte Carlo harness and the random-matrix checks.

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "robscatter/config.hpp"
#include "robscatter/errors.hpp"
#include "robscatter/io.hpp"
#include "robscatter/rmt_checks.hpp"

namespace fs = std::filesystem;
using namespace robscatter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Invocation {
    std::string subcommand;
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int verbosity = 0;
};

// File name -> contents, written only once the whole computation succeeded.
using Outputs = std::map<std::string, std::string>;

int g_verbosity = 0;

void log(int level, const std::string& msg) {
    if (level <= g_verbosity) std::cerr << msg << '\n';
}

RunConfig load_config(const Invocation& inv) {
    RunConfig cfg;
    if (!inv.config_path.empty()) {
        if (!fs::exists(inv.config_path)) throw ValidationError("config file not found: " + inv.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(inv.config_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = config_from_json(j);
    }
    if (inv.seed) cfg.experiment.seed = *inv.seed;
    validate_config(cfg);
    return cfg;
}

std::string csv(const std::string& what, const std::string& body) {
    return header_comment(what) + body;
}

int run_estimate(const RunConfig& cfg, Outputs& out) {
    const ObservationSet obs = build_observations(cfg);
    for (const auto& w : model_warnings(obs)) log(1, "warning: " + w);
    const WeightFamily w = WeightFamily::make(cfg.weight.family, cfg.weight.alpha, obs.c());
    const ScatterResult r = solve_maronna(obs, w, cfg.solver.maronna);
    log(1, "maronna converged in " + std::to_string(r.iterations) + " iterations");

    std::ostringstream q;
    q.precision(17);
    q << "i,q\n";
    for (Index i = 0; i < r.q.size(); ++i) q << i << ',' << r.q(i) << '\n';
    out["q.csv"] = csv("estimate", q.str());

    std::ostringstream trace;
    trace.precision(17);
    write_residual_trace_csv(trace, r);
    out["residual_trace.csv"] = csv("estimate", trace.str());

    nlohmann::json j{{"N", obs.N},
                     {"n", obs.n},
                     {"iterations", r.iterations},
                     {"residual", r.residual},
                     {"C_hat", matrix_to_json(r.C_hat)},
                     {"q", std::vector<double>(r.q.data(), r.q.data() + r.q.size())}};
    out["estimate.json"] = j.dump(2) + "\n";

    std::cout.precision(12);
    if (obs.N <= 6) {
        std::cout << "C_hat =\n";
        for (Index a = 0; a < obs.N; ++a) {
            for (Index b = 0; b < obs.N; ++b) {
                const Complex z = r.C_hat(a, b);
                std::cout << "  " << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag())
                          << "i";
            }
            std::cout << '\n';
        }
    } else {
        std::cout << "C_hat: " << obs.N << "x" << obs.N << " (see estimate.json)\n";
    }
    std::cout << "q =";
    for (Index i = 0; i < std::min<Index>(r.q.size(), 10); ++i) std::cout << ' ' << r.q(i);
    if (r.q.size() > 10) std::cout << " ...";
    std::cout << "\niterations = " << r.iterations << ", residual = " << r.residual << '\n';
    return kExitOk;
}

int run_equivalents(const RunConfig& cfg, Outputs& out) {
    const ObservationSet obs = build_observations(cfg);
    const WeightFamily w = WeightFamily::make(cfg.weight.family, cfg.weight.alpha, obs.c());
    const EquivalentResult r = solve_delta_system(obs.B, obs.tau, w, cfg.solver.delta);

    std::ostringstream d;
    d.precision(17);
    d << "i,tau,delta\n";
    for (Index i = 0; i < r.delta.size(); ++i) d << i << ',' << obs.tau(i) << ',' << r.delta(i) << '\n';
    out["delta.csv"] = csv("equivalents", d.str());

    nlohmann::json j{{"chi_hat", r.chi_hat},
                     {"gamma_hat", r.gamma_hat},
                     {"iterations", r.iterations},
                     {"residual", r.residual}};
    out["equivalents.json"] = j.dump(2) + "\n";
    std::cout.precision(12);
    std::cout << "chi_hat = " << r.chi_hat << ", gamma_hat = " << r.gamma_hat << ", iterations = " << r.iterations
              << '\n';
    return kExitOk;
}

int run_mse(const RunConfig& cfg, Outputs& out) {
    const ExperimentConfig e = experiment_config(cfg);
    const MseExperiment ex = run_mse_experiment(e);
    std::ostringstream trials;
    write_trials_csv(trials, ex.trials);
    out["trials.csv"] = csv("mse", trials.str());
    std::ostringstream agg;
    write_aggregate_csv(agg, ex.points);
    out["mse.csv"] = csv("mse", agg.str());

    int code = kExitOk;
    std::cout.precision(6);
    for (const auto& p : ex.points) {
        std::cout << "N=" << p.N << " mse=" << p.mse << " stderr=" << p.stderr_ << " trials_ok=" << p.trials_ok << "/"
                  << p.trials << " mean_iters=" << p.mean_iters << '\n';
        if (p.failed) {
            std::cerr << "error: N=" << p.N << ": " << (p.trials - p.trials_ok)
                      << " trials failed, above the allowed fraction\n";
            code = kExitSolver;
        }
    }
    for (const auto& r : ex.trials) {
        if (!r.converged) log(1, "trial N=" + std::to_string(r.N) + " #" + std::to_string(r.trial) + ": " + r.failure);
    }
    return code;
}

int run_diagnostics(const RunConfig& cfg, Outputs& out) {
    const ExperimentConfig e = experiment_config(cfg);
    const auto rows = run_equivalence_diagnostics(e);
    std::ostringstream d;
    write_diagnostics_csv(d, e, rows);
    out["diagnostics.csv"] = csv("diagnostics", d.str());

    int code = kExitOk;
    const std::size_t per = static_cast<std::size_t>(e.trials);
    for (std::size_t g = 0; g < e.N_grid.size(); ++g) {
        const MsePoint p = aggregate_point(e.N_grid[g], std::span(rows).subspan(g * per, per), e.max_failure_rate);
        if (p.failed) {
            std::cerr << "error: N=" << p.N << ": too many failed trials\n";
            code = kExitSolver;
        }
    }
    return code;
}

int run_checks(const RunConfig& cfg, Outputs& out) {
    const auto reports = run_check_battery(cfg.experiment.seed);
    std::ostringstream os;
    write_check_csv_header(os);
    for (const auto& r : reports) {
        write_check_csv_row(os, r);
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " statistic=" << r.statistic
                  << " threshold=" << r.threshold << '\n';
    }
    out["checks.csv"] = csv("checks", os.str());
    return kExitOk;
}

int dispatch(const Invocation& inv) {
    RunConfig cfg;
    try {
        cfg = load_config(inv);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    Outputs out;
    int code = kExitOk;
    try {
        if (inv.subcommand == "estimate") {
            code = run_estimate(cfg, out);
        } else if (inv.subcommand == "equivalents") {
            code = run_equivalents(cfg, out);
        } else if (inv.subcommand == "mse") {
            code = run_mse(cfg, out);
        } else if (inv.subcommand == "diagnostics") {
            code = run_diagnostics(cfg, out);
        } else {
            code = run_checks(cfg, out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }

    out["config.json"] = config_to_json(cfg).dump(2) + "\n";
    try {
        fs::create_directories(inv.out_dir);
        for (const auto& [name, contents] : out) {
            write_file_atomic(fs::path(inv.out_dir) / name, contents);
            log(1, "wrote " + (fs::path(inv.out_dir) / name).string());
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return 1;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust scatter estimation and its random-matrix equivalents"};
    app.require_subcommand(0, 1);
    bool print_default = false;
    app.add_flag("--print-default-config", print_default, "Print the default configuration and exit");

    Invocation inv;
    const std::map<std::string, std::string> commands{
        {"estimate", "Solve the Maronna fixed point on one observation set"},
        {"equivalents", "Solve the delta system and (chi_hat, gamma_hat)"},
        {"mse", "Monte Carlo MSE of |S_hat - C_hat| across N_grid"},
        {"diagnostics", "Per-trial spectral and q/delta gaps"},
        {"checks", "Random-matrix check battery"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", inv.config_path, "JSON configuration file");
        sub->add_option("--out", inv.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", inv.seed, "Override experiment.seed");
        sub->add_flag_function("-v,--verbose", [&inv](std::int64_t count) { inv.verbosity = static_cast<int>(count); },
                               "Increase verbosity");
        sub->callback([&inv, name = name] { inv.subcommand = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (print_default) {
        std::cout << config_to_json(RunConfig{}).dump(2) << '\n';
        return kExitOk;
    }
    if (inv.subcommand.empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }
    g_verbosity = inv.verbosity;
    return dispatch(inv);
}
