#pragma once

#include <functional>
#include <optional>

#include "robscatter/linalg.hpp"
#include "robscatter/measures.hpp"
#include "robscatter/weights.hpp"

namespace robscatter {

struct FixedPointOptions {
    double tol = 1e-10;
    int max_iter = 10000;
};

enum class DeltaRoute {
    /// Reduced when tau has at most sqrt(n) distinct values, Full otherwise.
    Automatic,
    /// Picard iteration on all n coordinates.
    Full,
    /// Picard iteration on (chi, gamma), then delta_j = chi + tau_j gamma.
    Reduced,
};

struct DeltaOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    DeltaRoute route = DeltaRoute::Automatic;
    /// Starting vector for the Full route (all ones when empty).
    std::optional<Vector> initial;
};

/**
 * The map h whose fixed point is the delta system:
 *
 *   h_j(x) = (1/N) tr (B + tau_j I) M(x)^{-1},
 *   M(x)   = (1/n) sum_i v(x_i) (B + tau_i I) / (1 + c psi(x_i)).
 *
 * B is diagonalised once; every evaluation afterwards costs O(N + n).
 * evaluate_dense() forms M(x) and its inverse explicitly and exists as an
 * independent check of the spectral shortcut.
 */
class DeltaMap {
public:
    DeltaMap(const Matrix& B, Vector tau, const WeightFamily& w);

    Index N() const noexcept { return B_.rows(); }
    Index n() const noexcept { return tau_.size(); }
    const Vector& tau() const noexcept { return tau_; }
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    const WeightFamily& weight() const noexcept { return w_; }

    /// v(x) / (1 + c psi(x)); finite at x = 0 where it equals u(0).
    double coefficient(double x) const;

    Vector operator()(const Vector& x) const;
    Vector evaluate_dense(const Vector& x) const;

    /// T(x) = M(x)^{-1}, formed densely.
    Matrix resolvent(const Vector& x) const;

private:
    Matrix B_;
    Vector tau_;
    WeightFamily w_;
    Vector eigenvalues_;
};

struct EquivalentResult {
    Vector delta;
    double chi_hat = 0.0;  ///< (1/N) tr B T
    double gamma_hat = 0.0;  ///< (1/N) tr T
    Matrix T;
    int iterations = 0;
    /// max_j |h_j(delta) - delta_j| / delta_j
    double residual = 0.0;
};

/// Solves the n-dimensional delta system. Throws ValidationError on tau_i < 0
/// and ConvergenceError when max_iter sweeps do not reach tol.
EquivalentResult solve_delta_system(const Matrix& B, const Vector& tau, const WeightFamily& w,
                                    const DeltaOptions& opts = {});

/// Max relative residual of the delta system at x.
double delta_residual(const DeltaMap& h, const Vector& x);

struct ChiGamma {
    double chi = 0.0;
    double gamma = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// The two-dimensional map (x1, x2) -> (h1, h2) over measures FB and nu.
std::pair<double, double> chi_gamma_map(const DiscreteMeasure& FB, const DiscreteMeasure& nu,
                                        const WeightFamily& w, double x1, double x2);

/// (chi_hat, gamma_hat) from the matrix form: T = ((1/n) sum_j ...)^{-1} is
/// built densely at every sweep, chi = tr(B T)/N and gamma = tr(T)/N.
ChiGamma solve_chi_gamma_hat(const Matrix& B, const DiscreteMeasure& tau_measure, const WeightFamily& w,
                             const FixedPointOptions& opts = {});

/// Limiting (chi, gamma) for spectral distribution FB and scale law nu (unit mean).
ChiGamma solve_chi_gamma_infinity(const DiscreteMeasure& FB, const DiscreteMeasure& nu,
                                  const WeightFamily& w, const FixedPointOptions& opts = {});

using ScalarFunction = std::function<double(double)>;

/// Left side minus one of  int F^B(dy) / int ((y+t)/(t+eta)) f(t) nu(dt) = 1.
double eta_equation(const DiscreteMeasure& FB, const DiscreteMeasure& nu, const ScalarFunction& f,
                    double eta);

/// Unique positive root of eta_equation by bisection on (1e-14 mean(FB), max atom].
/// f must be positive with int f dnu = 1 (within 1e-8).
double solve_eta(const DiscreteMeasure& FB, const DiscreteMeasure& nu, const ScalarFunction& f,
                 double tol = 1e-12);

/// e_k = (f(tau_k)/n) tr ((B + tau_k I)/(tau_k + eta)) M^{-1},
/// M = (1/n) sum_i f(tau_i) (B + tau_i I) / ((tau_i + eta)(1 + e_i)).
Vector solve_e_system(const Matrix& B, const Vector& tau, const ScalarFunction& f, double eta,
                      const FixedPointOptions& opts = {});

/// c |f|_inf / (1 - c |f|_inf), the asymptotic ceiling on max_k e_k.
double e_system_bound(double c, double f_sup);

}  // namespace robscatter

namespace robscatter {

/// delta in the fully degenerate case (B = b I, constant tau): the root of
/// psi(delta) = 1 / (1 - c), equal to g(phi^{-1}(1)).
double degenerate_delta(const WeightFamily& w);

}  // namespace robscatter
