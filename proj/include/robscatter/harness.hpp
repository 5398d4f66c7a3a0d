#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "robscatter/equivalents.hpp"
#include "robscatter/estimator.hpp"
#include "robscatter/measures.hpp"
#include "robscatter/weights.hpp"

namespace robscatter {

struct ExperimentConfig {
    std::vector<Index> N_grid{20, 40, 80, 160};
    double ratio_n = 3.0;  ///< n = round(ratio_n N)
    double ratio_K = 0.5;  ///< K = max(1, round(ratio_K N))
    WeightKind family = WeightKind::ShiftedInverse;
    double alpha = 0.5;
    DiscreteMeasure nu = DiscreteMeasure::point_mass(1.0);
    int trials = 100;
    /// Index of the first trial; trial t always uses the same seeds.
    int trial_offset = 0;
    std::uint64_t seed = 1;
    MaronnaOptions maronna{};
    DeltaOptions delta{};
    /// Worker threads; 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// A grid point fails when more than this fraction of its trials fail.
    double max_failure_rate = 0.05;
};

/// Throws ValidationError when the configuration breaks a model constraint.
void validate_experiment(const ExperimentConfig& cfg);

Index sample_count(const ExperimentConfig& cfg, Index N);
Index signal_rank(const ExperimentConfig& cfg, Index N);

/// Everything measured on one observation set.
struct TrialRecord {
    Index N = 0;
    int trial = 0;
    bool converged = false;
    int iters = 0;
    double spectral_gap = 0.0;   ///< |S_hat - C_hat|
    double frobenius_gap = 0.0;  ///< |S_hat - C_hat|_F
    double q_delta_gap = 0.0;    ///< max_i |q_i - delta_i| / delta_i
    double delta_mean = 0.0;
    std::string failure;
};

/// The mixing matrix used for every trial at dimension N.
Matrix experiment_mixing(const ExperimentConfig& cfg, Index N);

/// Generates one observation set and compares C_hat with S_hat. Solver
/// failures are caught and reported through `converged` / `failure`.
TrialRecord run_trial(const ExperimentConfig& cfg, Index N, int trial);

struct MsePoint {
    Index N = 0;
    double mse = 0.0;     ///< mean of |S_hat - C_hat|^2 over converged trials
    double stderr_ = 0.0;
    double mean_iters = 0.0;
    int trials_ok = 0;
    int trials = 0;
    bool failed = false;  ///< failure rate above cfg.max_failure_rate
};

struct MseExperiment {
    std::vector<TrialRecord> trials;
    std::vector<MsePoint> points;
};

MseExperiment run_mse_experiment(const ExperimentConfig& cfg);

/// Per-trial rows for the equivalence diagnostics (same trials as the MSE run).
std::vector<TrialRecord> run_equivalence_diagnostics(const ExperimentConfig& cfg);

MsePoint aggregate_point(Index N, std::span<const TrialRecord> records, double max_failure_rate);

/// Pairwise (cascade) summation; result does not depend on thread schedule.
double pairwise_sum(std::span<const double> values);

/// Runs body(0..count-1) on `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// N,trial,mse_spectral,mse_frobenius,q_delta_gap,iters,converged
void write_trials_csv(std::ostream& os, std::span<const TrialRecord> records);
/// N,mse_mean,mse_stderr,trials_ok
void write_aggregate_csv(std::ostream& os, std::span<const MsePoint> points);
/// N,trial,spectral_gap,q_delta_gap,iters,delta_mean,delta_reference,converged
void write_diagnostics_csv(std::ostream& os, const ExperimentConfig& cfg, std::span<const TrialRecord> records);

}  // namespace robscatter
