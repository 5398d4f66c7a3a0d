#include "robscatter/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "robscatter/datagen.hpp"
#include "robscatter/errors.hpp"
#include "robscatter/random.hpp"

namespace robscatter {

void validate_experiment(const ExperimentConfig& cfg) {
    for (Index N : cfg.N_grid) {
        if (N < 1) throw ValidationError("experiment: every N must be >= 1");
    }
    if (!(cfg.ratio_n > 1.0)) throw ValidationError("experiment: ratio_n must exceed 1");
    if (!(cfg.ratio_K > 0.0 && cfg.ratio_K <= 1.0)) {
        throw ValidationError("experiment: ratio_K must lie in (0, 1]");
    }
    if (cfg.trials < 1) throw ValidationError("experiment: trials must be >= 1");
    if (cfg.trial_offset < 0) throw ValidationError("experiment: trial_offset must be >= 0");
    if (!(cfg.max_failure_rate >= 0.0 && cfg.max_failure_rate < 1.0)) {
        throw ValidationError("experiment: max_failure_rate must lie in [0, 1)");
    }
    if (std::abs(cfg.nu.mean() - 1.0) > 1e-6) {
        throw ValidationError("experiment: nu must have unit mean");
    }
    // The weight family rejects c phi_inf >= 1; check every grid point.
    for (Index N : cfg.N_grid) {
        const Index n = sample_count(cfg, N);
        if (n <= N) throw ValidationError("experiment: n must exceed N at N = " + std::to_string(N));
        (void)WeightFamily::make(cfg.family, cfg.alpha, static_cast<double>(N) / static_cast<double>(n));
    }
}

Index sample_count(const ExperimentConfig& cfg, Index N) {
    return static_cast<Index>(std::llround(cfg.ratio_n * static_cast<double>(N)));
}

Index signal_rank(const ExperimentConfig& cfg, Index N) {
    return std::max<Index>(1, static_cast<Index>(std::llround(cfg.ratio_K * static_cast<double>(N))));
}

Matrix experiment_mixing(const ExperimentConfig& cfg, Index N) {
    return generate_mixing(N, signal_rank(cfg, N),
                           derive_seed(cfg.seed, streams::kMixing, static_cast<std::uint64_t>(N)));
}

namespace {

TrialRecord run_trial_with(const ExperimentConfig& cfg, const Matrix& A, Index N, int trial) {
    TrialRecord rec;
    rec.N = N;
    rec.trial = trial;
    const Index n = sample_count(cfg, N);
    const std::uint64_t seed = derive_seed(derive_seed(cfg.seed, streams::kTrial, static_cast<std::uint64_t>(N)),
                                           streams::kTrial, static_cast<std::uint64_t>(trial));
    try {
        const ObservationSet obs = generate_observations(A, cfg.nu, n, seed);
        const WeightFamily w = WeightFamily::make(cfg.family, cfg.alpha, obs.c());
        const ScatterResult est = solve_maronna(obs, w, cfg.maronna);
        rec.iters = est.iterations;
        const EquivalentResult eq = solve_delta_system(obs.B, obs.tau, w, cfg.delta);
        const Matrix S = assemble_S_hat(obs, w, eq.delta);
        const Matrix diff = hermitian_part(S - est.C_hat);
        rec.spectral_gap = spectral_norm(diff);
        rec.frobenius_gap = diff.norm();
        rec.q_delta_gap = ((est.q - eq.delta).cwiseAbs().array() / eq.delta.array()).maxCoeff();
        rec.delta_mean = eq.delta.mean();
        rec.converged = std::isfinite(rec.spectral_gap) && std::isfinite(rec.frobenius_gap)
                        && std::isfinite(rec.q_delta_gap);
        if (!rec.converged) rec.failure = "non-finite statistic";
    } catch (const ConvergenceError& e) {
        rec.converged = false;
        rec.iters = static_cast<int>(e.iterations());
        rec.failure = e.what();
    } catch (const NumericalError& e) {
        rec.converged = false;
        rec.failure = e.what();
    }
    return rec;
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, Index N, int trial) {
    return run_trial_with(cfg, experiment_mixing(cfg, N), N, trial);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

MsePoint aggregate_point(Index N, std::span<const TrialRecord> records, double max_failure_rate) {
    MsePoint p;
    p.N = N;
    p.trials = static_cast<int>(records.size());
    std::vector<double> sq;
    std::vector<double> iters;
    for (const auto& r : records) {
        iters.push_back(static_cast<double>(r.iters));
        if (!r.converged) continue;
        sq.push_back(r.spectral_gap * r.spectral_gap);
    }
    p.trials_ok = static_cast<int>(sq.size());
    const int failures = p.trials - p.trials_ok;
    p.failed = p.trials == 0 || failures > max_failure_rate * p.trials;
    if (!iters.empty()) p.mean_iters = pairwise_sum(iters) / static_cast<double>(iters.size());
    if (!sq.empty()) {
        p.mse = pairwise_sum(sq) / static_cast<double>(sq.size());
        if (sq.size() > 1) {
            std::vector<double> dev(sq.size());
            for (std::size_t i = 0; i < sq.size(); ++i) dev[i] = (sq[i] - p.mse) * (sq[i] - p.mse);
            const double var = pairwise_sum(dev) / static_cast<double>(sq.size() - 1);
            p.stderr_ = std::sqrt(var / static_cast<double>(sq.size()));
        }
    }
    return p;
}

std::vector<TrialRecord> run_equivalence_diagnostics(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    std::vector<Matrix> mixing;
    for (Index N : cfg.N_grid) mixing.push_back(experiment_mixing(cfg, N));
    const std::size_t per = static_cast<std::size_t>(cfg.trials);
    std::vector<TrialRecord> out(cfg.N_grid.size() * per);
    // Largest N first so the slowest jobs do not end up last in the queue.
    std::vector<std::size_t> order(out.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = order.size() - 1 - k;
    parallel_for(out.size(), cfg.threads, [&](std::size_t k) {
        const std::size_t job = order[k];
        const std::size_t g = job / per;
        const int trial = cfg.trial_offset + static_cast<int>(job % per);
        out[job] = run_trial_with(cfg, mixing[g], cfg.N_grid[g], trial);
    });
    return out;
}

MseExperiment run_mse_experiment(const ExperimentConfig& cfg) {
    MseExperiment ex;
    ex.trials = run_equivalence_diagnostics(cfg);
    const std::size_t per = static_cast<std::size_t>(cfg.trials);
    for (std::size_t g = 0; g < cfg.N_grid.size(); ++g) {
        std::span<const TrialRecord> slice(ex.trials.data() + g * per, per);
        ex.points.push_back(aggregate_point(cfg.N_grid[g], slice, cfg.max_failure_rate));
    }
    return ex;
}

namespace {

void put(std::ostream& os, double x) {
    os << x;
}

}  // namespace

void write_trials_csv(std::ostream& os, std::span<const TrialRecord> records) {
    os << "N,trial,mse_spectral,mse_frobenius,q_delta_gap,iters,converged\n";
    os.precision(17);
    for (const auto& r : records) {
        os << r.N << ',' << r.trial << ',';
        // Failed trials leave the statistics empty rather than emit a number.
        if (r.converged) {
            put(os, r.spectral_gap * r.spectral_gap);
            os << ',';
            put(os, r.frobenius_gap * r.frobenius_gap);
            os << ',';
            put(os, r.q_delta_gap);
        } else {
            os << ",,";
        }
        os << ',' << r.iters << ',' << (r.converged ? "true" : "false") << '\n';
    }
}

void write_aggregate_csv(std::ostream& os, std::span<const MsePoint> points) {
    os << "N,mse_mean,mse_stderr,trials_ok\n";
    os.precision(17);
    for (const auto& p : points) {
        os << p.N << ',';
        if (p.trials_ok > 0) {
            put(os, p.mse);
            os << ',';
            put(os, p.stderr_);
        } else {
            os << ',';
        }
        os << ',' << p.trials_ok << '\n';
    }
}

void write_diagnostics_csv(std::ostream& os, const ExperimentConfig& cfg, std::span<const TrialRecord> records) {
    os << "N,trial,spectral_gap,q_delta_gap,iters,delta_mean,delta_reference,converged\n";
    os.precision(17);
    for (const auto& r : records) {
        const Index n = sample_count(cfg, r.N);
        const WeightFamily w = WeightFamily::make(cfg.family, cfg.alpha,
                                                  static_cast<double>(r.N) / static_cast<double>(n));
        os << r.N << ',' << r.trial << ',';
        if (r.converged) {
            put(os, r.spectral_gap);
            os << ',';
            put(os, r.q_delta_gap);
        } else {
            os << ',';
        }
        os << ',' << r.iters << ',';
        if (r.converged) put(os, r.delta_mean);
        os << ',';
        put(os, degenerate_delta(w));
        os << ',' << (r.converged ? "true" : "false") << '\n';
    }
}

}  // namespace robscatter
