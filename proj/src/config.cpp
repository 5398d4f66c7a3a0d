#include "robscatter/config.hpp"

#include <cmath>
#include <set>

#include "robscatter/errors.hpp"
#include "robscatter/random.hpp"

namespace robscatter {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& section, const std::set<std::string>& known) {
    if (!j.is_object()) throw ValidationError("config: '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ValidationError("config: unknown key '" + section + "." + key + "'");
    }
}

template <typename T>
void read(const json& j, const std::string& section, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config: '" + section + "." + key + "' has the wrong type");
    }
}

}  // namespace

std::string to_string(DeltaRoute route) {
    switch (route) {
        case DeltaRoute::Automatic: return "automatic";
        case DeltaRoute::Full: return "full";
        case DeltaRoute::Reduced: return "reduced";
    }
    return "automatic";
}

DeltaRoute parse_delta_route(const std::string& s) {
    if (s == "automatic") return DeltaRoute::Automatic;
    if (s == "full") return DeltaRoute::Full;
    if (s == "reduced") return DeltaRoute::Reduced;
    throw ValidationError("unknown delta route '" + s + "'");
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    reject_unknown(j, "<root>", {"model", "weight", "solver", "experiment"});

    if (j.contains("model")) {
        const json& m = j.at("model");
        reject_unknown(m, "model", {"N", "n", "K", "nu", "observations"});
        read(m, "model", "N", cfg.model.N);
        read(m, "model", "n", cfg.model.n);
        read(m, "model", "K", cfg.model.K);
        if (m.contains("nu")) cfg.model.nu = measure_from_json(m.at("nu"));
        if (m.contains("observations") && !m.at("observations").is_null()) {
            cfg.model.observations = m.at("observations");
        }
    }
    if (j.contains("weight")) {
        const json& w = j.at("weight");
        reject_unknown(w, "weight", {"family", "alpha"});
        std::string family(to_string(cfg.weight.family));
        read(w, "weight", "family", family);
        cfg.weight.family = parse_weight_kind(family);
        read(w, "weight", "alpha", cfg.weight.alpha);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s, "solver", {"maronna_tol", "maronna_max_iter", "delta_tol", "delta_max_iter", "delta_route"});
        read(s, "solver", "maronna_tol", cfg.solver.maronna.tol);
        read(s, "solver", "maronna_max_iter", cfg.solver.maronna.max_iter);
        read(s, "solver", "delta_tol", cfg.solver.delta.tol);
        read(s, "solver", "delta_max_iter", cfg.solver.delta.max_iter);
        std::string route = to_string(cfg.solver.delta.route);
        read(s, "solver", "delta_route", route);
        cfg.solver.delta.route = parse_delta_route(route);
    }
    if (j.contains("experiment")) {
        const json& e = j.at("experiment");
        reject_unknown(e, "experiment",
                       {"N_grid", "ratio_n", "ratio_K", "trials", "trial_offset", "seed", "threads",
                        "max_failure_rate"});
        read(e, "experiment", "N_grid", cfg.experiment.N_grid);
        read(e, "experiment", "ratio_n", cfg.experiment.ratio_n);
        read(e, "experiment", "ratio_K", cfg.experiment.ratio_K);
        read(e, "experiment", "trials", cfg.experiment.trials);
        read(e, "experiment", "trial_offset", cfg.experiment.trial_offset);
        read(e, "experiment", "seed", cfg.experiment.seed);
        read(e, "experiment", "threads", cfg.experiment.threads);
        read(e, "experiment", "max_failure_rate", cfg.experiment.max_failure_rate);
    }
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json model{{"N", cfg.model.N}, {"n", cfg.model.n}, {"K", cfg.model.K}, {"nu", cfg.model.nu}};
    model["observations"] = cfg.model.observations ? *cfg.model.observations : json(nullptr);
    return json{
        {"model", model},
        {"weight", {{"family", std::string(to_string(cfg.weight.family))}, {"alpha", cfg.weight.alpha}}},
        {"solver",
         {{"maronna_tol", cfg.solver.maronna.tol},
          {"maronna_max_iter", cfg.solver.maronna.max_iter},
          {"delta_tol", cfg.solver.delta.tol},
          {"delta_max_iter", cfg.solver.delta.max_iter},
          {"delta_route", to_string(cfg.solver.delta.route)}}},
        {"experiment",
         {{"N_grid", cfg.experiment.N_grid},
          {"ratio_n", cfg.experiment.ratio_n},
          {"ratio_K", cfg.experiment.ratio_K},
          {"trials", cfg.experiment.trials},
          {"trial_offset", cfg.experiment.trial_offset},
          {"seed", cfg.experiment.seed},
          {"threads", cfg.experiment.threads},
          {"max_failure_rate", cfg.experiment.max_failure_rate}}},
    };
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
    ExperimentConfig e;
    e.N_grid = cfg.experiment.N_grid;
    e.ratio_n = cfg.experiment.ratio_n;
    e.ratio_K = cfg.experiment.ratio_K;
    e.family = cfg.weight.family;
    e.alpha = cfg.weight.alpha;
    e.nu = cfg.model.nu;
    e.trials = cfg.experiment.trials;
    e.trial_offset = cfg.experiment.trial_offset;
    e.seed = cfg.experiment.seed;
    e.maronna = cfg.solver.maronna;
    e.delta = cfg.solver.delta;
    e.threads = cfg.experiment.threads;
    e.max_failure_rate = cfg.experiment.max_failure_rate;
    return e;
}

void validate_config(const RunConfig& cfg) {
    const auto& s = cfg.solver;
    if (!(s.maronna.tol > 0.0) || s.maronna.max_iter < 1) {
        throw ValidationError("config: maronna_tol must be > 0 and maronna_max_iter >= 1");
    }
    if (!(s.delta.tol > 0.0) || s.delta.max_iter < 1) {
        throw ValidationError("config: delta_tol must be > 0 and delta_max_iter >= 1");
    }
    if (cfg.model.observations) {
        const ObservationSet obs = observations_from_json(*cfg.model.observations);
        if (obs.n <= obs.N) throw ValidationError("config: observations need n > N");
        (void)WeightFamily::make(cfg.weight.family, cfg.weight.alpha, obs.c());
    } else {
        const auto& m = cfg.model;
        if (m.N < 1 || m.K < 1) throw ValidationError("config: model.N and model.K must be >= 1");
        if (m.n <= m.N) throw ValidationError("config: model.n must exceed model.N");
        if (std::abs(m.nu.mean() - 1.0) > 1e-6) throw ValidationError("config: model.nu must have unit mean");
        (void)WeightFamily::make(cfg.weight.family, cfg.weight.alpha,
                                 static_cast<double>(m.N) / static_cast<double>(m.n));
    }
    validate_experiment(experiment_config(cfg));
}

ObservationSet build_observations(const RunConfig& cfg) {
    if (cfg.model.observations) return observations_from_json(*cfg.model.observations);
    const auto& m = cfg.model;
    const std::uint64_t seed = cfg.experiment.seed;
    const Matrix A = generate_mixing(m.N, m.K, derive_seed(seed, streams::kMixing, static_cast<std::uint64_t>(m.N)));
    return generate_observations(A, m.nu, m.n, derive_seed(seed, streams::kTrial));
}

}  // namespace robscatter
