#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robscatter/linalg.hpp"
#include "robscatter/measures.hpp"

namespace robscatter {

/// Observations y_i = A s_i + sqrt(tau_i) w_i stored column-wise in Y (N x n).
struct ObservationSet {
    Matrix Y;    ///< N x n
    Vector tau;  ///< n scale factors
    Matrix A;    ///< N x K mixing matrix
    Matrix B;    ///< A A*
    Index N = 0;
    Index n = 0;
    Index K = 0;

    double c() const { return static_cast<double>(N) / static_cast<double>(n); }
};

/// N x K matrix of independent circular complex Gaussians with variance 1/K.
Matrix generate_mixing(Index N, Index K, std::uint64_t seed);

/**
 * Draws n observations from the signal-plus-elliptical-noise model.
 *
 * Column i uses its own generator seeded with derive_seed(seed, kColumn, i):
 * first s_i ~ CN(0, I_K), then w_i = sqrt(N) g / |g| with g ~ CN(0, I_N).
 * The scales tau come from sample_tau on a separate stream. Requires n > N.
 */
ObservationSet generate_observations(const Matrix& A, const DiscreteMeasure& nu, Index n,
                                     std::uint64_t seed);

/// Wraps explicit data; B is recomputed from A. Throws ValidationError on shape mismatch.
ObservationSet make_observation_set(Matrix Y, Vector tau, Matrix A);

/// Soft checks on B: tr(B)/N >= 1e-3 and |B| <= 1e3.
std::vector<std::string> model_warnings(const ObservationSet& obs);

void to_json(nlohmann::json& j, const ObservationSet& obs);
ObservationSet observations_from_json(const nlohmann::json& j);

/// Complex matrix as nested rows of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace robscatter
