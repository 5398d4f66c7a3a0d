#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "robscatter/datagen.hpp"
#include "robscatter/equivalents.hpp"
#include "robscatter/estimator.hpp"
#include "robscatter/harness.hpp"
#include "robscatter/measures.hpp"
#include "robscatter/weights.hpp"

namespace robscatter {

/// Data for the single-instance subcommands (estimate, equivalents).
struct ModelConfig {
    Index N = 20;
    Index n = 60;
    Index K = 10;
    DiscreteMeasure nu = DiscreteMeasure::point_mass(1.0);
    /// Explicit {Y, tau, A}; overrides N, n, K and nu when present.
    std::optional<nlohmann::json> observations;
};

struct WeightConfig {
    WeightKind family = WeightKind::ShiftedInverse;
    double alpha = 0.5;
};

struct SolverConfig {
    MaronnaOptions maronna{};
    DeltaOptions delta{};
};

struct ExperimentSection {
    std::vector<Index> N_grid{20, 40, 80, 160};
    double ratio_n = 3.0;
    double ratio_K = 0.5;
    int trials = 100;
    int trial_offset = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double max_failure_rate = 0.05;
};

/// One JSON document with sections {model, weight, solver, experiment}.
struct RunConfig {
    ModelConfig model;
    WeightConfig weight;
    SolverConfig solver;
    ExperimentSection experiment;
};

/// Missing fields take their defaults; unknown keys are rejected.
/// Throws ValidationError on any malformed entry.
RunConfig config_from_json(const nlohmann::json& j);
/// Fully resolved document, defaults included.
nlohmann::json config_to_json(const RunConfig& cfg);

/// Runs every module validator that applies without generating data.
void validate_config(const RunConfig& cfg);

/// Explicit observations, or a draw from the model with the master seed.
ObservationSet build_observations(const RunConfig& cfg);

ExperimentConfig experiment_config(const RunConfig& cfg);

std::string to_string(DeltaRoute route);
DeltaRoute parse_delta_route(const std::string& s);

}  // namespace robscatter
