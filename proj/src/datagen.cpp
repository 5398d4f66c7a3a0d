#include "robscatter/datagen.hpp"

#include <cmath>

#include "robscatter/errors.hpp"
#include "robscatter/random.hpp"

namespace robscatter {

Matrix generate_mixing(Index N, Index K, std::uint64_t seed) {
    if (N < 1) throw ValidationError("generate_mixing: N must be >= 1");
    if (K < 1) throw ValidationError("generate_mixing: K must be >= 1");
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(K));
    Matrix a(N, K);
    // Column-major fill so the stream layout does not depend on Eigen internals.
    for (Index col = 0; col < K; ++col) {
        a.col(col) = scale * complex_gaussian_vector(N, rng);
    }
    return a;
}

ObservationSet generate_observations(const Matrix& A, const DiscreteMeasure& nu, Index n,
                                     std::uint64_t seed) {
    const Index N = A.rows();
    const Index K = A.cols();
    if (N < 1 || K < 1) throw ValidationError("generate_observations: A must be at least 1x1");
    if (n <= N) {
        throw ValidationError("generate_observations: need n > N (got N=" + std::to_string(N)
                              + ", n=" + std::to_string(n) + ")");
    }
    const std::vector<double> taus =
        sample_tau(nu, static_cast<std::size_t>(n), derive_seed(seed, streams::kTau));

    ObservationSet obs;
    obs.N = N;
    obs.n = n;
    obs.K = K;
    obs.A = A;
    obs.B = A * A.adjoint();
    obs.tau = Eigen::Map<const Vector>(taus.data(), n);
    obs.Y.resize(N, n);
    for (Index i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, streams::kColumn, static_cast<std::uint64_t>(i)));
        const ComplexVector s = complex_gaussian_vector(K, rng);
        const ComplexVector w = sphere_vector(N, rng);
        obs.Y.col(i) = A * s + std::sqrt(obs.tau(i)) * w;
    }
    return obs;
}

ObservationSet make_observation_set(Matrix Y, Vector tau, Matrix A) {
    if (Y.rows() < 1 || Y.cols() < 1) throw ValidationError("observation matrix is empty");
    if (tau.size() != Y.cols()) {
        throw ValidationError("tau has " + std::to_string(tau.size()) + " entries, expected "
                              + std::to_string(Y.cols()));
    }
    if (A.rows() != Y.rows() || A.cols() < 1) {
        throw ValidationError("mixing matrix must be N x K with K >= 1");
    }
    for (Index i = 0; i < tau.size(); ++i) {
        if (!(tau(i) >= 0.0) || !std::isfinite(tau(i))) throw ValidationError("tau must be finite and >= 0");
    }
    if (!Y.allFinite() || !A.allFinite()) throw ValidationError("observations must be finite");
    ObservationSet obs;
    obs.N = Y.rows();
    obs.n = Y.cols();
    obs.K = A.cols();
    obs.B = A * A.adjoint();
    obs.Y = std::move(Y);
    obs.tau = std::move(tau);
    obs.A = std::move(A);
    return obs;
}

std::vector<std::string> model_warnings(const ObservationSet& obs) {
    std::vector<std::string> out;
    const double mean_eig = obs.B.trace().real() / static_cast<double>(obs.N);
    if (mean_eig < 1e-3) out.push_back("tr(B)/N = " + std::to_string(mean_eig) + " is below 1e-3");
    const double norm = spectral_norm(hermitian_part(obs.B));
    if (norm > 1e3) out.push_back("|B| = " + std::to_string(norm) + " exceeds 1e3");
    if (!(obs.N < obs.n)) out.push_back("N >= n: aspect ratio is not below one");
    return out;
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw ValidationError("matrix JSON must be a non-empty array of rows");
    }
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j.front().size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw ValidationError("matrix JSON rows have inconsistent lengths");
        }
        for (Index c = 0; c < cols; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (e.is_number()) {
                m(r, c) = Complex(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw ValidationError("matrix entries must be [re, im] pairs");
            }
        }
    }
    return m;
}

void to_json(nlohmann::json& j, const ObservationSet& obs) {
    j = nlohmann::json{{"N", obs.N},
                       {"n", obs.n},
                       {"K", obs.K},
                       {"Y", matrix_to_json(obs.Y)},
                       {"tau", std::vector<double>(obs.tau.data(), obs.tau.data() + obs.tau.size())},
                       {"A", matrix_to_json(obs.A)}};
}

ObservationSet observations_from_json(const nlohmann::json& j) {
    try {
        Matrix y = matrix_from_json(j.at("Y"));
        const auto taus = j.at("tau").get<std::vector<double>>();
        Vector tau = Eigen::Map<const Vector>(taus.data(), static_cast<Index>(taus.size()));
        Matrix a = j.contains("A") ? matrix_from_json(j.at("A")) : Matrix::Zero(y.rows(), 1);
        ObservationSet obs = make_observation_set(std::move(y), std::move(tau), std::move(a));
        if (j.contains("N") && j.at("N").get<Index>() != obs.N) throw ValidationError("N does not match Y");
        if (j.contains("n") && j.at("n").get<Index>() != obs.n) throw ValidationError("n does not match Y");
        return obs;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed observation JSON: ") + e.what());
    }
}

}  // namespace robscatter
