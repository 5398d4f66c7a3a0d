#include "robscatter/rmt_checks.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

#include "robscatter/calibration.hpp"
#include "robscatter/datagen.hpp"
#include "robscatter/equivalents.hpp"
#include "robscatter/errors.hpp"
#include "robscatter/estimator.hpp"
#include "robscatter/random.hpp"

namespace robscatter {

namespace {

// Check identifiers double as seed streams.
enum CheckStream : std::uint64_t {
    kTraceStream = 1,
    kSmallestStream = 2,
    kConcentrationStream = 3,
    kGaussianStream = 4,
    kDetEqStream = 5,
};

std::uint64_t trial_seed(std::uint64_t seed, CheckStream stream, int trial) {
    return derive_seed(derive_seed(seed, streams::kCheck, stream), streams::kTrial,
                       static_cast<std::uint64_t>(trial));
}

Index half_rank(Index N) { return std::max<Index>(1, N / 2); }

Matrix random_hermitian(Index dim, double norm, Rng& rng) {
    Matrix g(dim, dim);
    for (Index col = 0; col < dim; ++col) g.col(col) = complex_gaussian_vector(dim, rng);
    Matrix h = hermitian_part(g);
    return (norm / spectral_norm(h)) * h;
}

// Y columns y_i = A s_i + w_i with A N x N/2 of variance 1/K entries.
Matrix model_samples(Index N, Index n, std::uint64_t seed) {
    const Matrix a = generate_mixing(N, half_rank(N), derive_seed(seed, streams::kMixing));
    return generate_observations(a, DiscreteMeasure::point_mass(1.0), n, seed).Y;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

// Smallest root in (-inf, lambda_1) of 1 - rho sum_k |b_k|^2 / (lambda_k - x).
double downdated_min_eigenvalue(const Vector& lambda, const Vector& b2, double rho) {
    const double top = lambda(0);
    double lo = top - rho * b2.sum();
    double hi = top;
    if (b2(0) == 0.0) hi = std::min(hi, lambda.size() > 1 ? lambda(1) : top);
    auto secular = [&](double x) -> double {
        double s = 0.0;
        for (Index k = 0; k < lambda.size(); ++k) {
            const double gap = lambda(k) - x;
            if (gap <= 0.0) return -INFINITY;
            s += b2(k) / gap;
        }
        return 1.0 - rho * s;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (secular(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // With b_1 = 0 the eigenvalue lambda_1 survives the downdate.
    return std::min(0.5 * (lo + hi), top);
}

}  // namespace

CheckReport make_report(std::string name, Index N, Index n, int trials, std::uint64_t seed, double statistic,
                        double threshold) {
    CheckReport r;
    r.name = std::move(name);
    r.N = N;
    r.n = n;
    r.trials = trials;
    r.seed = seed;
    r.statistic = statistic;
    r.threshold = threshold;
    r.passed = statistic <= threshold;
    return r;
}

CheckReport check_trace_lemma(Index N, Index n, int trials, std::uint64_t seed, double kappa,
                              TraceMatrixKind kind) {
    if (N < 1 || n < 1 || trials < 1) throw ValidationError("check_trace_lemma: sizes must be positive");
    if (!(kappa >= 0.0)) throw ValidationError("check_trace_lemma: kappa must be >= 0");
    const Index K = half_rank(N);
    const Index dim = N + K;
    const double inv_N = 1.0 / static_cast<double>(N);
    constexpr int kPool = 4;

    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng matrix_rng(derive_seed(trial_seed(seed, kTraceStream, t), streams::kMixing));
        std::vector<Matrix> pool;
        if (kind == TraceMatrixKind::RandomHermitian && kappa > 0.0) {
            for (int p = 0; p < kPool; ++p) pool.push_back(random_hermitian(dim, kappa, matrix_rng));
        }
        Rng rng(trial_seed(seed, kTraceStream, t));
        for (Index j = 0; j < n; ++j) {
            ComplexVector z(dim);
            z.head(K) = complex_gaussian_vector(K, rng);
            z.tail(N) = sphere_vector(N, rng);
            double dev = 0.0;
            switch (kind) {
                case TraceMatrixKind::Zero:
                    dev = 0.0;
                    break;
                case TraceMatrixKind::Identity:
                    dev = kappa * std::abs(z.squaredNorm() - static_cast<double>(dim)) * inv_N;
                    break;
                case TraceMatrixKind::RandomHermitian:
                    if (!pool.empty()) {
                        const Matrix& a = pool[static_cast<std::size_t>(j % kPool)];
                        dev = std::abs(z.dot(a * z).real() - a.trace().real()) * inv_N;
                    }
                    break;
            }
            worst = std::max(worst, dev);
        }
    }
    const double threshold = kind == TraceMatrixKind::Zero ? 0.0 : calibration::trace_lemma_threshold(N, kappa);
    return make_report("trace_lemma", N, n, trials, seed, worst, threshold);
}

LeaveOneOutSpectrum leave_one_out_spectrum(const Matrix& Y) {
    const Index n = Y.cols();
    const double rho = 1.0 / static_cast<double>(n);
    const Matrix sigma = weighted_scatter(Y, Vector::Ones(n));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
    if (eig.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    const Vector& lambda = eig.eigenvalues();
    const Matrix proj = eig.eigenvectors().adjoint() * Y;

    LeaveOneOutSpectrum out;
    out.lambda_min = lambda(0);
    out.lambda_max = lambda(lambda.size() - 1);
    out.lambda_min_loo.resize(n);
    for (Index j = 0; j < n; ++j) {
        const Vector b2 = proj.col(j).cwiseAbs2();
        out.lambda_min_loo(j) = downdated_min_eigenvalue(lambda, b2, rho);
    }
    return out;
}

CheckReport check_smallest_eigenvalue(Index N, Index n, int trials, std::uint64_t seed) {
    if (N < 1 || n <= N || trials < 1) throw ValidationError("check_smallest_eigenvalue: need n > N >= 1");
    double smallest = INFINITY;
    for (int t = 0; t < trials; ++t) {
        const auto spec = leave_one_out_spectrum(model_samples(N, n, trial_seed(seed, kSmallestStream, t)));
        smallest = std::min(smallest, spec.lambda_min_loo.minCoeff());
    }
    const double statistic = smallest > 0.0 ? 1.0 / smallest : INFINITY;
    return make_report("smallest_eigenvalue", N, n, trials, seed, statistic,
                       1.0 / calibration::kSmallestEigenvalueFloor);
}

CheckReport check_bounded_norm(Index N, Index n, int trials, std::uint64_t seed) {
    if (N < 1 || n <= N || trials < 1) throw ValidationError("check_bounded_norm: need n > N >= 1");
    double largest = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Matrix y = model_samples(N, n, trial_seed(seed, kSmallestStream, t));
        largest = std::max(largest, spectral_norm(weighted_scatter(y, Vector::Ones(n))));
    }
    return make_report("bounded_norm", N, n, trials, seed, largest, calibration::kBoundedNormMax);
}

double exponential_tail_bound(const std::vector<double>& alphas, double t) {
    double sum_sq = 0.0;
    double max_a = 0.0;
    for (double a : alphas) {
        sum_sq += a * a;
        max_a = std::max(max_a, a);
    }
    return std::exp(0.5) * std::exp(-std::min(t * t / (4.0 * sum_sq), t / (4.0 * max_a)));
}

double wilson_lower(std::size_t hits, std::size_t trials, double z) {
    if (trials == 0) return 0.0;
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double centre = p + z2 / (2.0 * nn);
    const double spread = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return std::max(0.0, (centre - spread) / (1.0 + z2 / nn));
}

CheckReport check_concentration(const std::vector<double>& alphas, const std::vector<double>& t_grid,
                                int trials, std::uint64_t seed, TailEvent event) {
    if (alphas.empty()) throw ValidationError("check_concentration: alphas must be non-empty");
    for (double a : alphas) {
        if (!(a > 0.0)) throw ValidationError("check_concentration: alphas must be positive");
    }
    if (trials < 1) throw ValidationError("check_concentration: trials must be >= 1");
    Rng rng(trial_seed(seed, kConcentrationStream, 0));
    std::exponential_distribution<double> expo(1.0);
    std::vector<std::size_t> hits(t_grid.size(), 0);
    for (int t = 0; t < trials; ++t) {
        double s = 0.0;
        for (double a : alphas) s += a * (expo(rng) - (event == TailEvent::Centered ? 1.0 : 0.0));
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            if (s > t_grid[k]) ++hits[k];
        }
    }
    double worst = -INFINITY;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double lower = wilson_lower(hits[k], static_cast<std::size_t>(trials), calibration::kConcentrationZ);
        worst = std::max(worst, lower - exponential_tail_bound(alphas, t_grid[k]));
    }
    if (t_grid.empty()) worst = 0.0;
    return make_report(event == TailEvent::Raw ? "concentration" : "concentration_centered",
                       static_cast<Index>(alphas.size()), 0, trials, seed, worst, 0.0);
}

GaussianEquivalenceSample gaussian_equivalence_sample(Index N, Index n, std::uint64_t seed, bool normalize) {
    const Index K = half_rank(N);
    const Matrix a = generate_mixing(N, K, derive_seed(seed, streams::kMixing));
    Matrix signal(N, n);
    Matrix raw(N, n);
    Matrix scaled(N, n);
    double eps = 0.0;
    const double root_n = std::sqrt(static_cast<double>(N));
    for (Index i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, streams::kColumn, static_cast<std::uint64_t>(i)));
        signal.col(i) = a * complex_gaussian_vector(K, rng);
        raw.col(i) = complex_gaussian_vector(N, rng);
        const double d = normalize ? root_n / raw.col(i).norm() : 1.0;
        eps = std::max(eps, std::abs(d - 1.0));
        scaled.col(i) = d * raw.col(i);
    }
    const Vector ones = Vector::Ones(n);
    const Matrix sigma = weighted_scatter(signal + scaled, ones);
    const Matrix sigma_tilde = weighted_scatter(signal + raw, ones);
    GaussianEquivalenceSample out;
    out.gap = spectral_norm(sigma - sigma_tilde);
    const double s_norm = spectral_norm(weighted_scatter(signal, ones));
    const double g_norm = spectral_norm(weighted_scatter(raw, ones));
    out.bound = 2.0 * eps * std::sqrt(s_norm * g_norm) + eps * (2.0 + eps) * g_norm;
    return out;
}

CheckReport check_gaussian_equivalence(Index N, Index n, int trials, std::uint64_t seed, bool normalize) {
    if (N < 1 || n < 1 || trials < 1) throw ValidationError("check_gaussian_equivalence: sizes must be positive");
    std::vector<double> gaps;
    for (int t = 0; t < trials; ++t) {
        gaps.push_back(gaussian_equivalence_sample(N, n, trial_seed(seed, kGaussianStream, t), normalize).gap);
    }
    return make_report("gaussian_equivalence", N, n, trials, seed, median(gaps),
                       calibration::gaussian_equivalence_threshold(N));
}

CheckReport check_deterministic_equivalent(Index N, Index n, int trials, std::uint64_t seed) {
    if (N < 1 || n <= N || trials < 1) throw ValidationError("check_deterministic_equivalent: need n > N >= 1");
    const DiscreteMeasure nu({0.5, 1.5}, {0.5, 0.5});
    const ScalarFunction f = [](double) { return 1.0; };
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = trial_seed(seed, kDetEqStream, t);
        const Matrix a = generate_mixing(N, half_rank(N), derive_seed(s, streams::kMixing));
        const ObservationSet obs = generate_observations(a, nu, n, s);
        const double eta = solve_eta(spectral_measure(obs.B), nu, f);
        const Vector e = solve_e_system(obs.B, obs.tau, f, eta);

        const Matrix eye = Matrix::Identity(N, N);
        Matrix m = Matrix::Zero(N, N);
        Matrix r = obs.Y;
        for (Index i = 0; i < n; ++i) {
            const double scale = f(obs.tau(i)) / (obs.tau(i) + eta);
            m += (scale / (1.0 + e(i))) * (obs.B + obs.tau(i) * eye);
            r.col(i) *= std::sqrt(scale);
        }
        m /= static_cast<double>(n);
        const double det_trace = m.inverse().trace().real() / static_cast<double>(n);

        // tr Sigma_j^{-1} by Sherman-Morrison from one factorisation of Sigma.
        const double inv_n = 1.0 / static_cast<double>(n);
        const Matrix sigma = weighted_scatter(r, Vector::Ones(n));
        Eigen::LLT<Matrix> llt(sigma);
        if (llt.info() != Eigen::Success) throw NumericalError("sample matrix is singular");
        const Matrix sigma_inv = llt.solve(eye);
        const double base = sigma_inv.trace().real();
        const Matrix solved = sigma_inv * r;
        for (Index j = 0; j < n; ++j) {
            const double quad = r.col(j).dot(solved.col(j)).real();
            const double loo = base + inv_n * solved.col(j).squaredNorm() / (1.0 - inv_n * quad);
            worst = std::max(worst, std::abs(loo * inv_n - det_trace));
        }
    }
    return make_report("deterministic_equivalent", N, n, trials, seed, worst,
                       calibration::deterministic_equivalent_threshold(N));
}

std::vector<CheckReport> run_check_battery(std::uint64_t seed) {
    std::vector<CheckReport> out;
    out.push_back(check_trace_lemma(100, 300, 1, seed, 1.0));
    out.push_back(check_smallest_eigenvalue(50, 150, 5, seed));
    out.push_back(check_bounded_norm(50, 150, 5, seed));
    out.push_back(check_concentration(std::vector<double>(100, 0.01), {1.5, 2.0, 3.0, 5.0}, 100000, seed));
    out.push_back(check_concentration(std::vector<double>(100, 0.01), {0.1, 0.2, 0.3, 0.5}, 100000, seed,
                                      TailEvent::Centered));
    out.push_back(check_gaussian_equivalence(200, 600, 5, seed));
    out.push_back(check_deterministic_equivalent(100, 300, 1, seed));
    return out;
}

void write_check_csv_header(std::ostream& os) { os << "name,N,n,trials,seed,statistic,threshold,passed\n"; }

void write_check_csv_row(std::ostream& os, const CheckReport& r) {
    os << r.name << ',' << r.N << ',' << r.n << ',' << r.trials << ',' << r.seed << ',' << std::setprecision(10)
       << r.statistic << ',' << r.threshold << ',' << (r.passed ? "true" : "false") << '\n';
}

}  // namespace robscatter
