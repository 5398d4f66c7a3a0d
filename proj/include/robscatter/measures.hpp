#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robscatter/errors.hpp"
#include "robscatter/linalg.hpp"

namespace robscatter {

class WeightFamily;

/**
 * Finite probability measure sum_k w_k delta_{a_k} on [0, inf).
 *
 * Stands in for the scale distribution nu, its empirical version nu_n and
 * for eigenvalue distributions F^B. Atoms are kept in the order supplied;
 * weights must be positive and sum to one within 1e-12.
 */
class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

    static DiscreteMeasure point_mass(double atom);
    /// Equal weights 1/size on the given atoms (repeats allowed).
    static DiscreteMeasure uniform(std::vector<double> atoms);
    /// Empirical measure of `samples` with identical values merged.
    static DiscreteMeasure empirical(std::span<const double> samples);

    const std::vector<double>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double mean() const;
    double max_atom() const;
    /// nu([0, m))
    double mass_below(double m) const;

    /// sum_k w_k f(a_k); throws EvaluationError on a non-finite f value.
    template <class F>
    double integrate(F&& f) const {
        double total = 0.0;
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            const double value = f(atoms_[k]);
            if (!std::isfinite(value)) {
                throw EvaluationError("integrand is not finite at atom " + std::to_string(atoms_[k]));
            }
            total += weights_[k] * value;
        }
        return total;
    }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// Free-function spelling of DiscreteMeasure::integrate.
template <class F>
double integrate(const DiscreteMeasure& mu, F&& f) {
    return mu.integrate(std::forward<F>(f));
}

/// n independent draws from mu. mu must have unit mean (within 1e-6).
std::vector<double> sample_tau(const DiscreteMeasure& mu, std::size_t n, std::uint64_t seed);

/// Eigenvalue distribution of a Hermitian PSD matrix: ascending atoms, weights 1/N.
DiscreteMeasure spectral_measure(const Matrix& b);
/// Same, from precomputed ascending eigenvalues.
DiscreteMeasure spectral_measure_from_eigenvalues(const Vector& eigenvalues);

/// Warnings for the small-scale mass condition nu([0, m)) < eps < 1 - 1/phi_inf.
/// An empty result means the condition holds.
std::vector<std::string> check_mass_condition(const DiscreteMeasure& nu, double m, double eps,
                                              const WeightFamily& w);

void to_json(nlohmann::json& j, const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

}  // namespace robscatter
