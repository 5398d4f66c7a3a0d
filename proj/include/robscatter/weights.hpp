#pragma once

#include <string_view>

namespace robscatter {

enum class WeightKind {
    /// u(t) = (1 + alpha) / (t + alpha)
    ShiftedInverse,
};

std::string_view to_string(WeightKind kind);
WeightKind parse_weight_kind(std::string_view name);

/**
 * Weight function u of the Maronna estimator together with the derived
 * scalar functions used by the deterministic equivalents:
 *
 *   phi(x)   = x u(x)                   increasing, bounded by phi_inf
 *   g(x)     = x / (1 - c phi(x))       increasing bijection of [0, inf)
 *   v(x)     = u(g^{-1}(x))             non-increasing
 *   psi(x)   = x v(x)                   increasing, bounded by psi_inf
 *
 * where c = N / n is the aspect ratio. Construction rejects any (family, c)
 * pair with c * phi_inf >= 1, since g is then not a bijection.
 *
 * Immutable after construction; every member is safe to call concurrently.
 */
class WeightFamily {
public:
    static WeightFamily shifted_inverse(double alpha, double c);
    static WeightFamily make(WeightKind kind, double alpha, double c);

    WeightKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double c() const noexcept { return c_; }
    double phi_inf() const noexcept { return phi_inf_; }
    double psi_inf() const noexcept { return phi_inf_ / (1.0 - c_ * phi_inf_); }

    double u(double x) const;
    double phi(double x) const;
    double g(double x) const;
    /// Inverse of g. Uses the family's closed form when one exists.
    double g_inv(double y) const;
    /// Inverse of g by bracketed bisection; valid for every family.
    double g_inv_bisect(double y) const;
    double v(double x) const;
    double psi(double x) const;

    /// Same family and alpha with a different aspect ratio.
    WeightFamily with_c(double c) const { return make(kind_, alpha_, c); }

private:
    WeightFamily(WeightKind kind, double alpha, double c, double phi_inf);

    WeightKind kind_;
    double alpha_;
    double c_;
    double phi_inf_;
};

}  // namespace robscatter
