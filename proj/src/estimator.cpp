#include "robscatter/estimator.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include "robscatter/errors.hpp"

namespace robscatter {

namespace {

constexpr double kMaxCondition = 1e14;
constexpr double kAspectTol = 1e-12;

void check_weight_matches(const ObservationSet& obs, const WeightFamily& w) {
    if (std::abs(w.c() - obs.c()) > kAspectTol) {
        throw ValidationError("weight family built for c=" + std::to_string(w.c())
                              + " but observations have N/n=" + std::to_string(obs.c()));
    }
}

// Factor Z and reject iterates that are indefinite or too ill-conditioned.
Eigen::LLT<Matrix> factor(const Matrix& z) {
    Eigen::LLT<Matrix> llt(z);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("iterate is not positive definite");
    }
    // (max L_ii / min L_ii)^2 bounds cond(Z) from below.
    const Vector diag = llt.matrixLLT().diagonal().real().cwiseAbs();
    const double lo = diag.minCoeff();
    const double ratio = lo > 0.0 ? diag.maxCoeff() / lo : INFINITY;
    if (!(ratio * ratio <= kMaxCondition)) {
        throw NumericalError("iterate condition number exceeds 1e14");
    }
    return llt;
}

Vector quadratic_forms_from(const Eigen::LLT<Matrix>& llt, const Matrix& y) {
    const Matrix x = llt.matrixL().solve(y);
    return x.colwise().squaredNorm().transpose() / static_cast<double>(y.rows());
}

// Relative spectral-norm gap |delta| / |ref|. Far from convergence the
// Frobenius lower bound |delta|_F / (sqrt(N) |ref|_F) already exceeds `tol`
// and is returned instead, skipping two eigen-solves.
double relative_gap(const Matrix& delta, const Matrix& ref, double tol, bool& exact) {
    const double sqrt_n = std::sqrt(static_cast<double>(delta.rows()));
    const double lower = delta.norm() / sqrt_n / ref.norm();
    if (lower > tol) {
        exact = false;
        return lower;
    }
    exact = true;
    return spectral_norm(hermitian_part(delta)) / spectral_norm(ref);
}

}  // namespace

Matrix weighted_scatter(const Matrix& Y, const Vector& weights) {
    if (weights.size() != Y.cols()) throw ValidationError("weighted_scatter: weight count mismatch");
    const double inv_n = 1.0 / static_cast<double>(Y.cols());
    Matrix out = Matrix::Zero(Y.rows(), Y.rows());
    // Split the weights across both factors so the rank update stays Hermitian.
    Matrix scaled = Y;
    for (Index i = 0; i < Y.cols(); ++i) {
        if (weights(i) < 0.0) throw ValidationError("weighted_scatter: negative weight");
        scaled.col(i) *= std::sqrt(weights(i) * inv_n);
    }
    out.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    out.triangularView<Eigen::StrictlyUpper>() = out.adjoint();
    return out;
}

Vector quadratic_forms(const Matrix& Y, const Matrix& Z) { return quadratic_forms_from(factor(Z), Y); }

Matrix maronna_rhs(const Matrix& Y, const WeightFamily& w, const Matrix& Z) {
    const Vector d = quadratic_forms(Y, Z);
    return weighted_scatter(Y, d.unaryExpr([&](double x) { return w.u(x); }));
}

double maronna_residual(const Matrix& Y, const WeightFamily& w, const Matrix& Z) {
    return spectral_norm(hermitian_part(Z - maronna_rhs(Y, w, Z))) / spectral_norm(hermitian_part(Z));
}

ScatterResult solve_maronna(const ObservationSet& obs, const WeightFamily& w, const MaronnaOptions& opts) {
    check_weight_matches(obs, w);
    if (!(opts.tol > 0.0)) throw ValidationError("solve_maronna: tol must be positive");
    if (opts.max_iter < 1) throw ValidationError("solve_maronna: max_iter must be >= 1");
    const Index N = obs.N;

    Matrix z = Matrix::Identity(N, N);
    if (opts.initial) {
        if (opts.initial->rows() != N || opts.initial->cols() != N) {
            throw ValidationError("solve_maronna: initial iterate has the wrong shape");
        }
        require_hermitian(*opts.initial, 1e-10, "solve_maronna initial iterate");
        z = hermitian_part(*opts.initial);
    }

    ScatterResult result;
    double last_change = INFINITY;
    double last_residual = INFINITY;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const auto llt = factor(z);
        const Vector d = quadratic_forms_from(llt, obs.Y);
        const Matrix next = weighted_scatter(obs.Y, d.unaryExpr([&](double x) { return w.u(x); }));

        const Matrix delta = next - z;
        bool exact = false;
        const double residual = relative_gap(delta, z, opts.tol, exact);
        result.residual_trace.push_back(residual);
        last_residual = residual;

        if (exact && residual <= opts.tol && last_change <= opts.tol) {
            result.C_hat = std::move(z);
            result.q = d.unaryExpr([&](double x) { return w.g(x); });
            result.iterations = it;
            result.residual = residual;
            return result;
        }
        bool change_exact = false;
        last_change = relative_gap(delta, next, opts.tol, change_exact);
        z = next;
    }
    throw ConvergenceError("Maronna iteration did not converge", static_cast<std::size_t>(opts.max_iter),
                           last_residual);
}

Vector extract_q(const ObservationSet& obs, const WeightFamily& w, const Matrix& C_hat) {
    const Vector d = quadratic_forms(obs.Y, C_hat);
    return d.unaryExpr([&](double x) { return w.g(x); });
}

Vector leave_one_out_q(const ObservationSet& obs, const WeightFamily& w, const Matrix& C_hat) {
    const Vector d = quadratic_forms(obs.Y, C_hat);
    const double inv_n = 1.0 / static_cast<double>(obs.n);
    Vector q(obs.n);
    for (Index i = 0; i < obs.n; ++i) {
        const ComplexVector y = obs.Y.col(i);
        const Matrix loo = C_hat - (inv_n * w.u(d(i))) * (y * y.adjoint());
        Eigen::LLT<Matrix> llt(hermitian_part(loo));
        if (llt.info() != Eigen::Success) throw NumericalError("leave-one-out matrix is not positive definite");
        q(i) = y.dot(llt.solve(y)).real() / static_cast<double>(obs.N);
    }
    return q;
}

Matrix assemble_S_hat(const ObservationSet& obs, const WeightFamily& w, const Vector& delta) {
    if (delta.size() != obs.n) throw ValidationError("assemble_S_hat: delta must have n entries");
    return weighted_scatter(obs.Y, delta.unaryExpr([&](double x) { return w.v(x); }));
}

Matrix assemble_S_corollary(const ObservationSet& obs, const WeightFamily& w, double chi, double gamma) {
    if (!(chi >= 0.0) || !(gamma >= 0.0)) throw DomainError("assemble_S_corollary: chi and gamma must be >= 0");
    const Vector delta = (chi + gamma * obs.tau.array()).matrix();
    return assemble_S_hat(obs, w, delta);
}

void write_residual_trace_csv(std::ostream& os, const ScatterResult& result) {
    os << "iter,residual\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < result.residual_trace.size(); ++k) {
        os << (k + 1) << ',' << result.residual_trace[k] << '\n';
    }
}

}  // namespace robscatter
