#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "robscatter/errors.hpp"
#include "robscatter/weights.hpp"

using robscatter::WeightFamily;
using doctest::Approx;

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> out;
    for (int k = 0; k < points; ++k) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1)));
    }
    return out;
}

std::vector<double> lin_grid(double lo, double hi, int points) {
    std::vector<double> out;
    for (int k = 0; k < points; ++k) out.push_back(lo + (hi - lo) * k / (points - 1));
    return out;
}

}  // namespace

TEST_CASE("u at reference points") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    CHECK(w.u(0.0) == Approx(3.0).epsilon(1e-15));
    CHECK(w.u(1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(w.u(1e6) < 2e-6);
}

TEST_CASE("phi, g, v and psi at reference points") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    CHECK(w.phi(0.0) == 0.0);
    CHECK(w.phi(1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(w.phi(0.5) == Approx(0.75).epsilon(1e-15));
    CHECK(w.g(0.0) == 0.0);
    CHECK(w.g(1.0) == Approx(1.5).epsilon(1e-14));
    CHECK(w.g(2.0) == Approx(2.0 / 0.6).epsilon(1e-14));
    CHECK(w.g_inv(0.0) == 0.0);
    CHECK(w.g_inv(1.5) == Approx(1.0).epsilon(1e-14));
    CHECK(w.v(0.0) == Approx(3.0).epsilon(1e-14));
    CHECK(w.v(1.5) == Approx(1.0).epsilon(1e-14));
    CHECK(w.v(0.5) >= w.v(1.5));
    CHECK(w.v(1.5) >= w.v(5.0));
    CHECK(w.psi(0.0) == 0.0);
    CHECK(w.psi(1.5) == Approx(1.5).epsilon(1e-14));
    CHECK(std::abs(w.psi(1e6) - 3.0) < 0.03);
    CHECK(w.phi_inf() == Approx(1.5));
    CHECK(w.psi_inf() == Approx(3.0));
}

TEST_CASE("g round trip and agreement with bisection") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    for (double y : {0.1, 1.0, 10.0, 100.0}) {
        CHECK(std::abs(w.g(w.g_inv(y)) - y) <= 1e-10);
    }
    for (double y : log_grid(1e-6, 1e6, 80)) {
        CHECK(std::abs(w.g_inv(y) - w.g_inv_bisect(y)) <= 1e-11 * std::max(1.0, w.g_inv(y)));
    }
}

TEST_CASE("matches the independent formulas") {
    for (double c : {0.25, 1.0 / 3.0, 0.5}) {
        const auto w = WeightFamily::shifted_inverse(0.5, c);
        const oracle::Weights o{0.5, c};
        for (double x : log_grid(1e-3, 1e4, 50)) {
            CHECK(w.g_inv(x) == Approx(o.g_inv(x)).epsilon(1e-11));
            CHECK(w.v(x) == Approx(o.v(x)).epsilon(1e-11));
            CHECK(w.psi(x) == Approx(o.psi(x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("psi / (1 + c psi) equals phi composed with g inverse") {
    for (double c : {0.25, 1.0 / 3.0, 0.5}) {
        const auto w = WeightFamily::shifted_inverse(0.5, c);
        double worst = 0.0;
        for (double x : log_grid(1e-3, 1e4, 200)) {
            const double lhs = w.psi(x) / (1.0 + c * w.psi(x));
            worst = std::max(worst, std::abs(lhs - w.phi(w.g_inv(x))));
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("u is non-increasing and phi is increasing and bounded") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    const auto xs = log_grid(1e-4, 1e5, 300);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        CHECK(w.u(xs[k]) <= w.u(xs[k - 1]));
        CHECK(w.phi(xs[k]) > w.phi(xs[k - 1]));
        CHECK(w.phi(xs[k]) < w.phi_inf());
        CHECK(w.psi(xs[k]) > w.psi(xs[k - 1]));
    }
}

TEST_CASE("phi is Lipschitz with constant u(0)") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    const auto xs = lin_grid(0.0, 1e3, 120);
    for (double x : xs) {
        for (double y : xs) {
            CHECK(std::abs(w.phi(x) - w.phi(y)) <= w.u(0.0) * std::abs(x - y) + 1e-12);
        }
    }
}

TEST_CASE("linear bounds on phi and psi") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    for (double x : log_grid(1e-4, 1e4, 100)) {
        CHECK(w.phi(x) <= w.u(0.0) * x + 1e-15);
        CHECK(w.psi(x) <= w.v(0.0) * x * (1.0 + 1e-14));
    }
    for (double m : {0.1, 1.0, 10.0}) {
        for (double x : lin_grid(0.0, m, 50)) {
            CHECK(w.u(m) * x <= w.phi(x) + 1e-15);
            CHECK(w.v(m) * x <= w.psi(x) * (1.0 + 1e-14) + 1e-15);
        }
    }
}

TEST_CASE("g inverse is 1-Lipschitz") {
    const double c = 1.0 / 3.0;
    const auto w = WeightFamily::shifted_inverse(0.5, c);
    const auto ys = log_grid(1e-3, 1e3, 60);
    for (double y : ys) {
        for (double z : ys) {
            if (z > y) continue;
            const double diff = w.g_inv(y) - w.g_inv(z);
            const double tight = (y - z) * (1.0 - c * w.phi(w.g_inv(y)));
            CHECK(diff >= -1e-12);
            CHECK(diff <= tight + 1e-10);
            CHECK(tight <= (y - z) + 1e-10);
        }
    }
}

TEST_CASE("construction rejects invalid parameters") {
    CHECK_THROWS_AS(WeightFamily::shifted_inverse(0.5, 2.0 / 3.0), robscatter::ValidationError);
    CHECK_THROWS_AS(WeightFamily::shifted_inverse(0.5, 0.0), robscatter::ValidationError);
    CHECK_THROWS_AS(WeightFamily::shifted_inverse(0.5, 1.0), robscatter::ValidationError);
    CHECK_THROWS_AS(WeightFamily::shifted_inverse(0.0, 0.3), robscatter::ValidationError);
    CHECK_NOTHROW(WeightFamily::shifted_inverse(0.5, 0.66));
}

TEST_CASE("negative arguments are domain errors") {
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    CHECK_THROWS_AS(w.u(-1.0), robscatter::DomainError);
    CHECK_THROWS_AS(w.g(-1.0), robscatter::DomainError);
    CHECK_THROWS_AS(w.g_inv(-1.0), robscatter::DomainError);
    CHECK_THROWS_AS(w.v(-0.1), robscatter::DomainError);
}

TEST_CASE("family names round trip") {
    CHECK(robscatter::parse_weight_kind("shifted_inverse") == robscatter::WeightKind::ShiftedInverse);
    CHECK(robscatter::to_string(robscatter::WeightKind::ShiftedInverse) == "shifted_inverse");
    CHECK_THROWS_AS(robscatter::parse_weight_kind("huber"), robscatter::ValidationError);
    const auto w = WeightFamily::make(robscatter::WeightKind::ShiftedInverse, 0.5, 0.25).with_c(0.5);
    CHECK(w.c() == 0.5);
}
