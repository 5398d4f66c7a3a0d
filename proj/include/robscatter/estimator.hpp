#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "robscatter/datagen.hpp"
#include "robscatter/linalg.hpp"
#include "robscatter/weights.hpp"

namespace robscatter {

struct MaronnaOptions {
    double tol = 1e-9;
    int max_iter = 500;
    /// Starting iterate Z^0 (Hermitian PSD). Identity when empty.
    std::optional<Matrix> initial;
};

struct ScatterResult {
    Matrix C_hat;
    /// q_i = (1/N) y_i* C_(i)^{-1} y_i, the leave-one-out quadratic forms.
    Vector q;
    int iterations = 0;
    /// |C_hat - RHS(C_hat)| / |C_hat| in spectral norm.
    double residual = 0.0;
    /// Residual of each iterate, in iteration order. While an iterate is far
    /// from the tolerance the entry is the cheaper Frobenius lower bound
    /// |Z - RHS(Z)|_F / (sqrt(N) |Z|_F); near convergence it is exact.
    std::vector<double> residual_trace;
};

/**
 * Solves Z = (1/n) sum_i u((1/N) y_i* Z^{-1} y_i) y_i y_i* by Picard iteration
 * from Z^0 (identity by default).
 *
 * Each sweep factors Z once (Cholesky) and reuses the factor for all n
 * quadratic forms. Stops once the relative spectral-norm change between
 * consecutive iterates and the fixed-point residual of the returned iterate
 * are both <= tol.
 *
 * Throws ConvergenceError after max_iter sweeps and NumericalError when an
 * iterate loses positive definiteness or its condition number exceeds 1e14.
 * The weight family's aspect ratio must equal N/n.
 */
ScatterResult solve_maronna(const ObservationSet& obs, const WeightFamily& w,
                            const MaronnaOptions& opts = {});

/// Right-hand side of the fixed-point equation evaluated at Z.
Matrix maronna_rhs(const Matrix& Y, const WeightFamily& w, const Matrix& Z);

/// |Z - RHS(Z)| / |Z| in spectral norm.
double maronna_residual(const Matrix& Y, const WeightFamily& w, const Matrix& Z);

/// (1/N) y_i* Z^{-1} y_i for every column of Y.
Vector quadratic_forms(const Matrix& Y, const Matrix& Z);

/// q_i through the rank-one identity q_i = g((1/N) y_i* C^{-1} y_i).
Vector extract_q(const ObservationSet& obs, const WeightFamily& w, const Matrix& C_hat);
inline Vector extract_q(const ObservationSet& obs, const WeightFamily& w, const ScatterResult& r) {
    return extract_q(obs, w, r.C_hat);
}

/// q_i by forming every C_(i) = C - (1/n) u(.) y_i y_i* explicitly. O(n N^3).
Vector leave_one_out_q(const ObservationSet& obs, const WeightFamily& w, const Matrix& C_hat);

/// (1/n) sum_i weights_i y_i y_i*
Matrix weighted_scatter(const Matrix& Y, const Vector& weights);

/// S_hat = (1/n) sum_i v(delta_i) y_i y_i*
Matrix assemble_S_hat(const ObservationSet& obs, const WeightFamily& w, const Vector& delta);

/// S = (1/n) sum_i v(chi + tau_i gamma) y_i y_i*
Matrix assemble_S_corollary(const ObservationSet& obs, const WeightFamily& w, double chi, double gamma);

/// Writes "iter,residual" rows.
void write_residual_trace_csv(std::ostream& os, const ScatterResult& result);

}  // namespace robscatter
