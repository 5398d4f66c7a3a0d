#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "robscatter/datagen.hpp"
#include "robscatter/errors.hpp"
#include "robscatter/random.hpp"

using namespace robscatter;

TEST_CASE("mixing matrix scale") {
    const Matrix a = generate_mixing(4, 2, 5);
    CHECK(a.rows() == 4);
    CHECK(a.cols() == 2);
    const double tr = (a * a.adjoint()).trace().real() / 4.0;
    CHECK(tr >= 0.2);
    CHECK(tr <= 3.0);

    const Matrix big = generate_mixing(50, 40, 6);
    const double var = big.squaredNorm() / static_cast<double>(big.size());
    CHECK(std::abs(var * 40.0 - 1.0) < 0.2);

    double mean_sq = 0.0;
    for (std::uint64_t s = 0; s < 2000; ++s) mean_sq += std::norm(generate_mixing(1, 1, s)(0, 0));
    CHECK(std::abs(mean_sq / 2000.0 - 1.0) < 0.1);
    CHECK(generate_mixing(3, 2, 8) == generate_mixing(3, 2, 8));
}

TEST_CASE("pure noise columns have norm sqrt(N)") {
    const Matrix a = Matrix::Zero(6, 1);
    const auto obs = generate_observations(a, DiscreteMeasure::point_mass(1.0), 20, 3);
    for (Index i = 0; i < obs.n; ++i) CHECK(std::abs(obs.Y.col(i).squaredNorm() - 6.0) <= 1e-10);
    CHECK(obs.c() == doctest::Approx(0.3));
}

TEST_CASE("second moments") {
    {
        const auto obs = generate_observations(Matrix::Zero(100, 1), DiscreteMeasure::point_mass(1.0), 300, 4);
        const Matrix s = obs.Y * obs.Y.adjoint() / 300.0;
        CHECK(std::abs(s.trace().real() / 100.0 - 1.0) < 0.1);
    }
    {
        const Matrix a = generate_mixing(50, 25, 9);
        const auto obs = generate_observations(a, DiscreteMeasure::point_mass(1.0), 150, 10);
        const double lhs = obs.Y.squaredNorm() / (50.0 * 150.0);
        const double rhs = obs.B.trace().real() / 50.0 + 1.0;
        CHECK(std::abs(lhs / rhs - 1.0) < 0.15);
        CHECK((obs.B - a * a.adjoint()).norm() <= 1e-10 * obs.B.norm());
    }
}

TEST_CASE("columns are reproducible and tau follows nu") {
    const Matrix a = generate_mixing(5, 2, 1);
    const DiscreteMeasure nu({0.5, 1.5}, {0.5, 0.5});
    const auto x = generate_observations(a, nu, 12, 77);
    const auto y = generate_observations(a, nu, 12, 77);
    CHECK(x.Y == y.Y);
    CHECK(x.tau == y.tau);
    for (Index i = 0; i < x.n; ++i) CHECK((x.tau(i) == 0.5 || x.tau(i) == 1.5));
    // A longer draw reuses the same leading columns.
    const auto z = generate_observations(a, nu, 20, 77);
    CHECK(z.Y.leftCols(12) == x.Y);
}

TEST_CASE("noise direction is unitarily invariant") {
    // Two-sample Kolmogorov-Smirnov on Re(first coordinate) of w and U w.
    const Index N = 4;
    Rng rng(derive_seed(5, 1));
    Matrix g(N, N);
    for (Index i = 0; i < N; ++i) g.col(i) = complex_gaussian_vector(N, rng);
    const Matrix U = g.householderQr().householderQ();
    std::vector<double> a, b;
    for (int k = 0; k < 1000; ++k) {
        a.push_back(sphere_vector(N, rng)(0).real());
        b.push_back((U * sphere_vector(N, rng))(0).real());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) - static_cast<double>(j)) / 1000.0);
    }
    // Critical value at p = 0.01 for two samples of 1000.
    CHECK(d < 1.628 * std::sqrt(2.0 / 1000.0));
}

TEST_CASE("validation and warnings") {
    const Matrix a = generate_mixing(5, 2, 1);
    CHECK_THROWS_AS(generate_observations(a, DiscreteMeasure::point_mass(1.0), 5, 1), ValidationError);
    CHECK_THROWS_AS(generate_mixing(0, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_observation_set(Matrix::Ones(2, 3), Vector::Ones(2), Matrix::Zero(2, 1)), ValidationError);
    Vector tau = Vector::Ones(3);
    tau(1) = -1.0;
    CHECK_THROWS_AS(make_observation_set(Matrix::Ones(2, 3), tau, Matrix::Zero(2, 1)), ValidationError);

    const auto quiet = generate_observations(Matrix::Zero(5, 1), DiscreteMeasure::point_mass(1.0), 10, 2);
    CHECK(!model_warnings(quiet).empty());
    const auto fine = generate_observations(a, DiscreteMeasure::point_mass(1.0), 10, 2);
    CHECK(model_warnings(fine).empty());
}

TEST_CASE("json round trip") {
    const auto obs = generate_observations(generate_mixing(3, 1, 1), DiscreteMeasure::point_mass(1.0), 5, 2);
    nlohmann::json j = obs;
    const auto back = observations_from_json(j);
    CHECK(back.Y == obs.Y);
    CHECK(back.tau == obs.tau);
    CHECK(back.A == obs.A);
    CHECK_THROWS_AS(observations_from_json(nlohmann::json{{"Y", 1}}), ValidationError);
}
