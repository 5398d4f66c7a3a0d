#include "robscatter/measures.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "robscatter/random.hpp"
#include "robscatter/weights.hpp"

namespace robscatter {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kUnitMeanTol = 1e-6;

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty()) throw ValidationError("measure needs at least one atom");
    if (atoms_.size() != weights_.size()) {
        throw ValidationError("measure has " + std::to_string(atoms_.size()) + " atoms but "
                              + std::to_string(weights_.size()) + " weights");
    }
    for (double a : atoms_) {
        if (!std::isfinite(a) || a < 0.0) {
            throw ValidationError("measure atoms must be finite and non-negative, got "
                                  + std::to_string(a));
        }
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w <= 0.0) {
            throw ValidationError("measure weights must be positive, got " + std::to_string(w));
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol) {
        throw ValidationError("measure weights sum to " + std::to_string(sum) + ", expected 1");
    }
}

DiscreteMeasure DiscreteMeasure::point_mass(double atom) { return DiscreteMeasure({atom}, {1.0}); }

DiscreteMeasure DiscreteMeasure::uniform(std::vector<double> atoms) {
    const std::size_t n = atoms.size();
    if (n == 0) throw ValidationError("measure needs at least one atom");
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    // Absorb rounding in the last weight so the sum check is exact.
    double head = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) head += weights[k];
    weights.back() = 1.0 - head;
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::empirical(std::span<const double> samples) {
    if (samples.empty()) throw ValidationError("empirical measure of an empty sample");
    std::map<double, std::size_t> counts;
    for (double s : samples) ++counts[s];
    std::vector<double> atoms;
    std::vector<double> weights;
    const double n = static_cast<double>(samples.size());
    for (const auto& [atom, count] : counts) {
        atoms.push_back(atom);
        weights.push_back(static_cast<double>(count) / n);
    }
    double head = std::accumulate(weights.begin(), weights.end() - 1, 0.0);
    weights.back() = 1.0 - head;
    return DiscreteMeasure(std::move(atoms), std::move(weights));
}

double DiscreteMeasure::mean() const {
    return integrate([](double x) { return x; });
}

double DiscreteMeasure::max_atom() const { return *std::max_element(atoms_.begin(), atoms_.end()); }

double DiscreteMeasure::mass_below(double m) const {
    double mass = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        if (atoms_[k] < m) mass += weights_[k];
    }
    return mass;
}

std::vector<double> sample_tau(const DiscreteMeasure& mu, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ValidationError("sample_tau: n must be >= 1");
    const double mean = mu.mean();
    if (std::abs(mean - 1.0) > kUnitMeanTol) {
        throw ValidationError("sample_tau: scale measure must have unit mean, got "
                              + std::to_string(mean));
    }
    std::vector<double> out(n);
    if (mu.size() == 1) {
        std::fill(out.begin(), out.end(), mu.atoms().front());
        return out;
    }
    // Inverse-CDF lookup keeps the draw sequence independent of library
    // distribution internals.
    std::vector<double> cdf(mu.size());
    std::partial_sum(mu.weights().begin(), mu.weights().end(), cdf.begin());
    cdf.back() = 1.0;
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (auto& tau : out) {
        const double r = unif(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), mu.size() - 1);
        tau = mu.atoms()[k];
    }
    return out;
}

DiscreteMeasure spectral_measure_from_eigenvalues(const Vector& eigenvalues) {
    std::vector<double> atoms(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    // PSD input: clip round-off below zero.
    for (auto& a : atoms) a = std::max(a, 0.0);
    return DiscreteMeasure::uniform(std::move(atoms));
}

DiscreteMeasure spectral_measure(const Matrix& b) {
    require_hermitian(b, 1e-10, "spectral_measure");
    if (b.rows() == 0) throw ValidationError("spectral_measure: empty matrix");
    return spectral_measure_from_eigenvalues(hermitian_eigenvalues(b));
}

std::vector<std::string> check_mass_condition(const DiscreteMeasure& nu, double m, double eps,
                                              const WeightFamily& w) {
    std::vector<std::string> warnings;
    const double cap = 1.0 - 1.0 / w.phi_inf();
    if (!(m > 0.0)) warnings.push_back("mass condition: m must be positive");
    const double mass = nu.mass_below(m);
    if (!(mass < eps)) {
        warnings.push_back("mass condition: nu([0," + std::to_string(m) + ")) = " + std::to_string(mass)
                           + " is not below eps = " + std::to_string(eps));
    }
    if (!(eps < cap)) {
        warnings.push_back("mass condition: eps = " + std::to_string(eps)
                           + " is not below 1 - 1/phi_inf = " + std::to_string(cap));
    }
    return warnings;
}

void to_json(nlohmann::json& j, const DiscreteMeasure& mu) {
    j = nlohmann::json{{"atoms", mu.atoms()}, {"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("atoms") || !j.contains("weights")) {
        throw ValidationError("measure JSON must be an object with 'atoms' and 'weights'");
    }
    try {
        return DiscreteMeasure(j.at("atoms").get<std::vector<double>>(),
                               j.at("weights").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed measure JSON: ") + e.what());
    }
}

}  // namespace robscatter
