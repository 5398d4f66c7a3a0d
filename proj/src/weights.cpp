#include "robscatter/weights.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "robscatter/errors.hpp"

namespace robscatter {

namespace {

constexpr double kBisectRelTol = 1e-12;
constexpr int kBisectMaxIter = 200;

void require_nonneg(double x, const char* fn) {
    if (!(x >= 0.0)) {
        throw DomainError(std::string(fn) + ": argument must be >= 0, got " + std::to_string(x));
    }
}

}  // namespace

std::string_view to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::ShiftedInverse:
            return "shifted_inverse";
    }
    return "unknown";
}

WeightKind parse_weight_kind(std::string_view name) {
    if (name == "shifted_inverse") return WeightKind::ShiftedInverse;
    throw ValidationError("unknown weight family '" + std::string(name) + "'");
}

WeightFamily::WeightFamily(WeightKind kind, double alpha, double c, double phi_inf)
    : kind_(kind), alpha_(alpha), c_(c), phi_inf_(phi_inf) {
    if (!(c_ > 0.0 && c_ < 1.0)) {
        throw ValidationError("aspect ratio c must lie in (0, 1), got " + std::to_string(c_));
    }
    if (!(phi_inf_ > 1.0)) {
        throw ValidationError("phi_inf must exceed 1, got " + std::to_string(phi_inf_));
    }
    if (!(c_ * phi_inf_ < 1.0)) {
        throw ValidationError("c * phi_inf must be < 1 (c=" + std::to_string(c_)
                              + ", phi_inf=" + std::to_string(phi_inf_) + ")");
    }
}

WeightFamily WeightFamily::shifted_inverse(double alpha, double c) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("shifted-inverse weight needs alpha > 0, got " + std::to_string(alpha));
    }
    return WeightFamily(WeightKind::ShiftedInverse, alpha, c, 1.0 + alpha);
}

WeightFamily WeightFamily::make(WeightKind kind, double alpha, double c) {
    switch (kind) {
        case WeightKind::ShiftedInverse:
            return shifted_inverse(alpha, c);
    }
    throw ValidationError("unsupported weight family");
}

double WeightFamily::u(double x) const {
    require_nonneg(x, "u");
    if (std::isinf(x)) return 0.0;
    return (1.0 + alpha_) / (x + alpha_);
}

double WeightFamily::phi(double x) const {
    require_nonneg(x, "phi");
    if (std::isinf(x)) return phi_inf_;
    return (1.0 + alpha_) * x / (x + alpha_);
}

double WeightFamily::g(double x) const {
    require_nonneg(x, "g");
    return x / (1.0 - c_ * phi(x));
}

double WeightFamily::g_inv(double y) const {
    require_nonneg(y, "g_inv");
    switch (kind_) {
        case WeightKind::ShiftedInverse: {
            // y = x (x + a) / (a + k x) with k = 1 - c (1 + a)  =>
            // x^2 + (a - k y) x - a y = 0, positive root.
            const double a = alpha_;
            const double k = 1.0 - c_ * phi_inf_;
            const double p = k * y - a;
            const double disc = std::sqrt(p * p + 4.0 * a * y);
            // Pick the form without cancellation.
            return p >= 0.0 ? 0.5 * (p + disc) : (2.0 * a * y) / (disc - p);
        }
    }
    return g_inv_bisect(y);
}

double WeightFamily::g_inv_bisect(double y) const {
    require_nonneg(y, "g_inv_bisect");
    if (y == 0.0) return 0.0;
    double lo = 0.0;
    double hi = std::max(1.0, y);
    int expansions = 0;
    while (g(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (++expansions > kBisectMaxIter || !std::isfinite(hi)) {
            throw ConvergenceError("g_inv: bracket expansion failed", expansions, g(lo) - y);
        }
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < kBisectMaxIter; ++it) {
        mid = 0.5 * (lo + hi);
        const double r = g(mid) - y;
        if (std::abs(r) <= kBisectRelTol * y) break;
        if (r < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
    }
    return mid;
}

double WeightFamily::v(double x) const {
    require_nonneg(x, "v");
    return u(g_inv(x));
}

double WeightFamily::psi(double x) const {
    require_nonneg(x, "psi");
    return x * v(x);
}

}  // namespace robscatter
