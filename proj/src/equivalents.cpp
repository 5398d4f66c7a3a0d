#include "robscatter/equivalents.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "robscatter/errors.hpp"

namespace robscatter {

namespace {

void require_tau(const Vector& tau) {
    if (tau.size() == 0) throw ValidationError("tau must be non-empty");
    for (Index i = 0; i < tau.size(); ++i) {
        if (!(tau(i) >= 0.0) || !std::isfinite(tau(i))) {
            throw ValidationError("tau entries must be finite and >= 0, got " + std::to_string(tau(i)));
        }
    }
}

void require_options(double tol, int max_iter) {
    if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double max_rel_diff(const Vector& a, const Vector& b) {
    double worst = 0.0;
    for (Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_diff(a(i), b(i)));
    return worst;
}

// (1/N) sum_k lambda_k / (a lambda_k + b) and (1/N) sum_k 1 / (a lambda_k + b).
std::pair<double, double> spectral_traces(const Vector& eig, double a, double b) {
    double chi = 0.0;
    double gamma = 0.0;
    for (Index k = 0; k < eig.size(); ++k) {
        const double m = a * eig(k) + b;
        if (!(m > 0.0)) throw NumericalError("averaged matrix is singular");
        chi += eig(k) / m;
        gamma += 1.0 / m;
    }
    const double inv_n = 1.0 / static_cast<double>(eig.size());
    return {chi * inv_n, gamma * inv_n};
}

// (1/N) tr(X Y) for square X, Y.
double real_trace_product(const Matrix& x, const Matrix& y) {
    return (x.transpose().array() * y.array()).sum().real() / static_cast<double>(x.rows());
}

Matrix invert_hpd(const Matrix& m) {
    Eigen::LLT<Matrix> llt(hermitian_part(m));
    if (llt.info() != Eigen::Success) throw NumericalError("averaged matrix is not positive definite");
    return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

void check_aspect(const WeightFamily& w, Index N, Index n) {
    const double c = static_cast<double>(N) / static_cast<double>(n);
    if (std::abs(c - w.c()) > 1e-12) {
        throw ValidationError("weight family built for c=" + std::to_string(w.c()) + " but N/n="
                              + std::to_string(c));
    }
}

// Shared two-variable sweep: weights over nu, traces over FB.
std::pair<double, double> chi_gamma_step(const DiscreteMeasure& FB, const DiscreteMeasure& nu,
                                         const WeightFamily& w, double x1, double x2) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t k = 0; k < nu.size(); ++k) {
        const double t = nu.atoms()[k];
        const double x = x1 + t * x2;
        const double coef = w.v(x) / (1.0 + w.c() * w.psi(x));
        a += nu.weights()[k] * coef;
        b += nu.weights()[k] * coef * t;
    }
    double chi = 0.0;
    double gamma = 0.0;
    for (std::size_t k = 0; k < FB.size(); ++k) {
        const double y = FB.atoms()[k];
        const double m = a * y + b;
        if (!(m > 0.0)) throw NumericalError("chi/gamma map: vanishing denominator");
        chi += FB.weights()[k] * y / m;
        gamma += FB.weights()[k] / m;
    }
    return {chi, gamma};
}

template <class Step>
ChiGamma iterate_chi_gamma(Step&& step, const FixedPointOptions& opts) {
    require_options(opts.tol, opts.max_iter);
    double chi = 1.0;
    double gamma = 1.0;
    double change = INFINITY;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const auto [next_chi, next_gamma] = step(chi, gamma);
        change = std::max(rel_diff(next_chi, chi), rel_diff(next_gamma, gamma));
        chi = next_chi;
        gamma = next_gamma;
        if (change <= opts.tol) {
            const auto [check_chi, check_gamma] = step(chi, gamma);
            const double residual = std::max(rel_diff(check_chi, chi), rel_diff(check_gamma, gamma));
            return ChiGamma{chi, gamma, it, residual};
        }
    }
    throw ConvergenceError("(chi, gamma) iteration did not converge", static_cast<std::size_t>(opts.max_iter),
                           change);
}

}  // namespace

DeltaMap::DeltaMap(const Matrix& B, Vector tau, const WeightFamily& w)
    : B_(hermitian_part(B)), tau_(std::move(tau)), w_(w) {
    require_hermitian(B, 1e-10, "delta system");
    if (B.rows() < 1) throw ValidationError("delta system: B is empty");
    require_tau(tau_);
    eigenvalues_ = hermitian_eigenvalues(B_).cwiseMax(0.0);
}

double DeltaMap::coefficient(double x) const { return w_.v(x) / (1.0 + w_.c() * w_.psi(x)); }

Vector DeltaMap::operator()(const Vector& x) const {
    if (x.size() != n()) throw ValidationError("delta map: argument has the wrong length");
    double a = 0.0;
    double b = 0.0;
    for (Index i = 0; i < n(); ++i) {
        const double coef = coefficient(x(i));
        a += coef;
        b += coef * tau_(i);
    }
    const double inv_n = 1.0 / static_cast<double>(n());
    const auto [chi, gamma] = spectral_traces(eigenvalues_, a * inv_n, b * inv_n);
    return (chi + gamma * tau_.array()).matrix();
}

Matrix DeltaMap::resolvent(const Vector& x) const {
    if (x.size() != n()) throw ValidationError("delta map: argument has the wrong length");
    const Index dim = N();
    const Matrix eye = Matrix::Identity(dim, dim);
    Matrix m = Matrix::Zero(dim, dim);
    for (Index i = 0; i < n(); ++i) {
        m += coefficient(x(i)) * (B_ + tau_(i) * eye);
    }
    m /= static_cast<double>(n());
    return invert_hpd(m);
}

Vector DeltaMap::evaluate_dense(const Vector& x) const {
    const Matrix t = resolvent(x);
    const Matrix eye = Matrix::Identity(N(), N());
    Vector out(n());
    for (Index j = 0; j < n(); ++j) {
        out(j) = real_trace_product(B_ + tau_(j) * eye, t);
    }
    return out;
}

double delta_residual(const DeltaMap& h, const Vector& x) { return max_rel_diff(h(x), x); }

EquivalentResult solve_delta_system(const Matrix& B, const Vector& tau, const WeightFamily& w,
                                    const DeltaOptions& opts) {
    require_options(opts.tol, opts.max_iter);
    const DeltaMap h(B, tau, w);
    check_aspect(w, h.N(), h.n());

    DeltaRoute route = opts.route;
    if (route == DeltaRoute::Automatic) {
        const std::set<double> distinct(tau.data(), tau.data() + tau.size());
        route = static_cast<double>(distinct.size()) <= std::sqrt(static_cast<double>(h.n()))
                    ? DeltaRoute::Reduced
                    : DeltaRoute::Full;
    }

    EquivalentResult result;
    if (route == DeltaRoute::Reduced) {
        const std::vector<double> taus(tau.data(), tau.data() + tau.size());
        const DiscreteMeasure nu_n = DiscreteMeasure::empirical(taus);
        const DiscreteMeasure fb = spectral_measure_from_eigenvalues(h.eigenvalues());
        const ChiGamma cg = iterate_chi_gamma(
            [&](double x1, double x2) { return chi_gamma_step(fb, nu_n, w, x1, x2); },
            FixedPointOptions{opts.tol, opts.max_iter});
        result.delta = (cg.chi + cg.gamma * tau.array()).matrix();
        result.iterations = cg.iterations;
        result.residual = delta_residual(h, result.delta);
    } else {
        Vector x = opts.initial.value_or(Vector::Ones(h.n()));
        if (x.size() != h.n()) throw ValidationError("delta system: initial vector has the wrong length");
        if ((x.array() < 0.0).any()) throw ValidationError("delta system: initial vector must be >= 0");
        double residual = INFINITY;
        bool converged = false;
        for (int it = 1; it <= opts.max_iter; ++it) {
            const Vector hx = h(x);
            residual = max_rel_diff(hx, x);
            result.iterations = it;
            if (residual <= opts.tol) {
                converged = true;
                break;
            }
            x = hx;
        }
        if (!converged) {
            throw ConvergenceError("delta system did not converge", static_cast<std::size_t>(opts.max_iter),
                                   residual);
        }
        result.delta = std::move(x);
        result.residual = residual;
    }

    result.T = h.resolvent(result.delta);
    const Index N = h.N();
    result.gamma_hat = result.T.trace().real() / static_cast<double>(N);
    result.chi_hat = real_trace_product(hermitian_part(B), result.T);
    return result;
}

std::pair<double, double> chi_gamma_map(const DiscreteMeasure& FB, const DiscreteMeasure& nu,
                                        const WeightFamily& w, double x1, double x2) {
    if (!(x1 >= 0.0) || !(x2 >= 0.0)) throw DomainError("chi_gamma_map: arguments must be >= 0");
    return chi_gamma_step(FB, nu, w, x1, x2);
}

ChiGamma solve_chi_gamma_hat(const Matrix& B, const DiscreteMeasure& tau_measure, const WeightFamily& w,
                             const FixedPointOptions& opts) {
    require_hermitian(B, 1e-10, "solve_chi_gamma_hat");
    const Matrix b = hermitian_part(B);
    const Index N = b.rows();
    const Matrix eye = Matrix::Identity(N, N);
    auto step = [&](double x1, double x2) {
        // Averaged matrix (1/n) sum_j coef_j (B + tau_j I), grouped by atom.
        Matrix m = Matrix::Zero(N, N);
        for (std::size_t k = 0; k < tau_measure.size(); ++k) {
            const double t = tau_measure.atoms()[k];
            const double x = x1 + t * x2;
            const double coef = w.v(x) / (1.0 + w.c() * w.psi(x));
            m += (tau_measure.weights()[k] * coef) * (b + t * eye);
        }
        const Matrix t_mat = invert_hpd(m);
        return std::pair<double, double>{real_trace_product(b, t_mat),
                                         t_mat.trace().real() / static_cast<double>(N)};
    };
    return iterate_chi_gamma(step, opts);
}

ChiGamma solve_chi_gamma_infinity(const DiscreteMeasure& FB, const DiscreteMeasure& nu,
                                  const WeightFamily& w, const FixedPointOptions& opts) {
    if (std::abs(nu.mean() - 1.0) > 1e-6) {
        throw ValidationError("solve_chi_gamma_infinity: nu must have unit mean, got "
                              + std::to_string(nu.mean()));
    }
    return iterate_chi_gamma([&](double x1, double x2) { return chi_gamma_step(FB, nu, w, x1, x2); }, opts);
}

double eta_equation(const DiscreteMeasure& FB, const DiscreteMeasure& nu, const ScalarFunction& f,
                    double eta) {
    return FB.integrate([&](double y) {
               const double denom = nu.integrate([&](double t) { return (y + t) / (t + eta) * f(t); });
               return 1.0 / denom;
           })
           - 1.0;
}

double solve_eta(const DiscreteMeasure& FB, const DiscreteMeasure& nu, const ScalarFunction& f, double tol) {
    if (!(tol > 0.0)) throw ValidationError("solve_eta: tol must be positive");
    for (double t : nu.atoms()) {
        const double ft = f(t);
        if (!(ft > 0.0) || !std::isfinite(ft)) throw ValidationError("solve_eta: f must be positive and finite");
    }
    const double mass = nu.integrate(f);
    if (std::abs(mass - 1.0) > 1e-8) {
        throw ValidationError("solve_eta: int f dnu must equal 1, got " + std::to_string(mass));
    }
    const double mean = FB.mean();
    if (!(mean > 0.0)) throw ValidationError("solve_eta: spectral measure must have positive mean");

    double lo = 1e-14 * mean;
    double hi = FB.max_atom();
    const double f_hi = eta_equation(FB, nu, f, hi);
    if (f_hi == 0.0) return hi;
    const double f_lo = eta_equation(FB, nu, f, lo);
    if (!(f_lo < 0.0 && f_hi > 0.0)) {
        throw ConvergenceError("solve_eta: root is not bracketed", 0, std::min(std::abs(f_lo), std::abs(f_hi)));
    }
    // The left side is increasing in eta.
    constexpr int kMaxIter = 400;
    for (int it = 0; it < kMaxIter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double value = eta_equation(FB, nu, f, mid);
        if (value == 0.0) return mid;
        if (value < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= tol * hi) break;
    }
    return 0.5 * (lo + hi);
}

Vector solve_e_system(const Matrix& B, const Vector& tau, const ScalarFunction& f, double eta,
                      const FixedPointOptions& opts) {
    require_options(opts.tol, opts.max_iter);
    require_tau(tau);
    require_hermitian(B, 1e-10, "solve_e_system");
    if (!(eta > 0.0)) throw ValidationError("solve_e_system: eta must be positive");
    const Vector eig = hermitian_eigenvalues(hermitian_part(B)).cwiseMax(0.0);
    const Index n = tau.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double N = static_cast<double>(eig.size());

    Vector weight(n);  // f(tau_i) / (tau_i + eta)
    for (Index i = 0; i < n; ++i) {
        const double fi = f(tau(i));
        if (!(fi > 0.0) || !std::isfinite(fi)) throw ValidationError("solve_e_system: f must be positive");
        weight(i) = fi / (tau(i) + eta);
    }

    Vector e = Vector::Zero(n);
    double change = INFINITY;
    for (int it = 1; it <= opts.max_iter; ++it) {
        double a = 0.0;
        double b = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double coef = weight(i) / (1.0 + e(i));
            a += coef;
            b += coef * tau(i);
        }
        const auto [chi, gamma] = spectral_traces(eig, a * inv_n, b * inv_n);
        // (1/n) tr(B + tau_k I) M^{-1} = (N/n) (chi + tau_k gamma)
        const Vector next = (weight.array() * (N * inv_n) * (chi + gamma * tau.array())).matrix();
        change = max_rel_diff(next, e);
        e = next;
        if (change <= opts.tol) return e;
    }
    throw ConvergenceError("e system did not converge", static_cast<std::size_t>(opts.max_iter), change);
}

double e_system_bound(double c, double f_sup) {
    const double prod = c * f_sup;
    if (!(prod < 1.0)) throw DomainError("e_system_bound: requires c |f|_inf < 1");
    return prod / (1.0 - prod);
}

}  // namespace robscatter

namespace robscatter {

double degenerate_delta(const WeightFamily& w) {
    // phi is increasing from 0 to phi_inf > 1, so phi^{-1}(1) is bracketed.
    double lo = 0.0;
    double hi = 1.0;
    while (w.phi(hi) < 1.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (w.phi(mid) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return w.g(0.5 * (lo + hi));
}

}  // namespace robscatter
