// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "robscatter/datagen.hpp"
#include "robscatter/equivalents.hpp"
#include "robscatter/estimator.hpp"
#include "robscatter/harness.hpp"
#include "robscatter/random.hpp"
#include "robscatter/rmt_checks.hpp"

using namespace robscatter;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%s; %.2fs]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double elapsed_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ObservationSet random_instance(Index N, Index n, Index K, std::uint64_t seed, const DiscreteMeasure& nu) {
    return generate_observations(generate_mixing(N, K, seed), nu, n, derive_seed(seed, 1));
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

Outcome weight_identity() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double c : {0.25, 1.0 / 3.0, 0.5}) {
        const auto w = WeightFamily::shifted_inverse(0.5, c);
        for (int k = 0; k < 200; ++k) {
            const double x = 1e-3 * std::pow(1e7, k / 199.0);
            worst = std::max(worst, std::abs(w.psi(x) / (1.0 + c * w.psi(x)) - w.phi(w.g_inv(x))));
        }
    }
    const double secs = elapsed_since(t0);
    return {worst <= 1e-10 && secs < 1.0, "max deviation " + fmt("%.2e", worst)};
}

Outcome degenerate() {
    const auto t0 = Clock::now();
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    const Index N = 10, n = 30;
    const auto r = solve_delta_system(Matrix::Identity(N, N), Vector::Ones(n), w);
    const auto cg = solve_chi_gamma_hat(Matrix::Identity(N, N), DiscreteMeasure::point_mass(1.0), w);
    const oracle::Weights o{0.5, 1.0 / 3.0};
    const double ref = oracle::bisect([&](double x) { return o.psi(x) - 1.5; }, 0.0, 100.0);
    double err = std::abs(ref - 1.5);
    err = std::max(err, (r.delta.array() - 1.5).abs().maxCoeff());
    err = std::max(err, std::abs(w.v(r.delta(0)) - 1.0));
    err = std::max({err, std::abs(r.chi_hat - 0.75), std::abs(r.gamma_hat - 0.75)});
    err = std::max({err, std::abs(cg.chi - 0.75), std::abs(cg.gamma - 0.75)});
    auto f1 = [](double) { return 1.0; };
    for (double b : {0.5, 1.0, 2.0}) {
        err = std::max(err, std::abs(solve_eta(DiscreteMeasure::point_mass(b), DiscreteMeasure::point_mass(1.0), f1) - b));
    }
    const Vector e = solve_e_system(Matrix::Identity(N, N), Vector::Ones(n), f1, 1.0);
    err = std::max(err, (e.array() - 0.5).abs().maxCoeff());
    const double secs = elapsed_since(t0);
    return {err <= 1e-8 && secs < 1.0, "max error " + fmt("%.2e", err)};
}

Outcome fixed_point_residual() {
    const auto t0 = Clock::now();
    double res = 0.0, rewrite = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto obs = random_instance(20, 60, 10, 1000 + s, DiscreteMeasure::point_mass(1.0));
        const auto w = WeightFamily::shifted_inverse(0.5, obs.c());
        const auto r = solve_maronna(obs, w);
        res = std::max({res, r.residual, maronna_residual(obs.Y, w, r.C_hat)});
        const Vector q = extract_q(obs, w, r);
        const Matrix s_q = weighted_scatter(obs.Y, q.unaryExpr([&](double x) { return w.v(x); }));
        rewrite = std::max(rewrite, spectral_norm(hermitian_part(r.C_hat - s_q)) / spectral_norm(r.C_hat));
    }
    const double secs = elapsed_since(t0);
    return {res <= 1e-9 && rewrite <= 1e-8 && secs < 30.0,
            "max residual " + fmt("%.2e", res) + ", max rewriting gap " + fmt("%.2e", rewrite)};
}

Outcome uniqueness() {
    double worst = 0.0;
    MaronnaOptions tight;
    tight.tol = 1e-11;
    for (std::uint64_t inst = 0; inst < 5; ++inst) {
        const auto obs = random_instance(20, 60, 10, 2000 + inst, DiscreteMeasure::point_mass(1.0));
        const auto w = WeightFamily::shifted_inverse(0.5, obs.c());
        Rng rng(derive_seed(2000 + inst, 2));
        std::vector<Matrix> sols;
        for (int k = 0; k < 5; ++k) {
            Matrix g(20, 20);
            for (Index j = 0; j < 20; ++j) g.col(j) = complex_gaussian_vector(20, rng);
            MaronnaOptions o = tight;
            o.initial = Matrix(g * g.adjoint() * std::exp(2.0 * (k - 2)) / 20.0);
            sols.push_back(solve_maronna(obs, w, o).C_hat);
        }
        for (std::size_t a = 0; a < sols.size(); ++a) {
            for (std::size_t b = a + 1; b < sols.size(); ++b) {
                worst = std::max(worst, spectral_norm(hermitian_part(sols[a] - sols[b])));
            }
        }
    }
    return {worst <= 1e-8, "max pairwise spectral gap " + fmt("%.2e", worst)};
}

Outcome affine_delta() {
    double worst = 0.0;
    std::mt19937_64 rng(3000);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Index N = 16, n = 48;
        const double a = unif(rng), b = unif(rng);
        const double m = (a + 1.0 + 2.0 * b) / 3.0;
        const DiscreteMeasure nu = DiscreteMeasure::uniform({a / m, 1.0 / m, 2.0 * b / m});
        const auto obs = random_instance(N, n, 1 + static_cast<Index>(unif(rng) * N), 3000 + s, nu);
        const auto w = WeightFamily::shifted_inverse(0.5, obs.c());
        const auto r = solve_delta_system(obs.B, obs.tau, w);
        const double chi = (obs.B * r.T).trace().real() / N;
        const double gamma = r.T.trace().real() / N;
        worst = std::max(worst, (r.delta - (chi + gamma * obs.tau.array()).matrix()).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-8, "max |delta - (chi + tau gamma)| " + fmt("%.2e", worst)};
}

Outcome interference() {
    std::mt19937_64 rng(4000);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double scales[] = {1.5, 2.0, 10.0};
    double pos = INFINITY, mono = INFINITY, scal = INFINITY;
    for (int probe = 0; probe < 100; ++probe) {
        const Index N = 4 + static_cast<Index>(unif(rng) * 12);
        const Index n = 3 * N;
        const DiscreteMeasure nu({0.5, 1.5}, {0.5, 0.5});
        const auto obs = random_instance(N, n, std::max<Index>(1, N / 2), 4000 + static_cast<std::uint64_t>(probe), nu);
        const DeltaMap h(obs.B, obs.tau, WeightFamily::shifted_inverse(0.5, obs.c()));
        Vector q(n), qp(n);
        for (Index i = 0; i < n; ++i) {
            qp(i) = 0.01 + 5.0 * unif(rng);
            q(i) = qp(i) + 0.01 + 2.0 * unif(rng);
        }
        const double alpha = scales[probe % 3];
        const Vector hq = h(q);
        pos = std::min(pos, hq.minCoeff());
        mono = std::min(mono, (hq - h(qp)).minCoeff());
        scal = std::min(scal, (alpha * hq - h(alpha * q)).minCoeff());
    }
    return {pos > 0.0 && mono > 0.0 && scal > 0.0,
            "min margins: positivity " + fmt("%.3e", pos) + ", monotonicity " + fmt("%.3e", mono) + ", scalability " +
                fmt("%.3e", scal)};
}

MseExperiment g_paper_run;

Outcome paper_trend() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg;
    cfg.N_grid = {20, 40, 80, 160};
    cfg.ratio_n = 3.0;
    cfg.ratio_K = 0.5;
    cfg.alpha = 0.5;
    cfg.nu = DiscreteMeasure::point_mass(1.0);
    cfg.trials = 100;
    cfg.seed = 1;
    g_paper_run = run_mse_experiment(cfg);
    const double secs = elapsed_since(t0);
    const auto& p = g_paper_run.points;
    bool ok = p.size() == 4 && secs < 900.0;
    std::ostringstream d;
    for (std::size_t k = 0; k < p.size(); ++k) {
        ok = ok && !p[k].failed && p[k].trials_ok >= 100;
        if (k > 0) ok = ok && p[k].mse < p[k - 1].mse;
        d << (k ? ", " : "mse ") << "N=" << p[k].N << ":" << fmt("%.4f", p[k].mse);
    }
    ok = ok && p.back().mse < 0.5 * p.front().mse;
    return {ok, d.str()};
}

Outcome proof_pivot() {
    // Paired batches of 5 trials (same trial indices) at N = 40 and N = 160.
    const auto& rows = g_paper_run.trials;
    if (rows.empty()) return {false, "criterion 7 run unavailable"};
    std::vector<double> small, large;
    for (const auto& r : rows) {
        if (!r.converged) continue;
        if (r.N == 40) small.push_back(r.q_delta_gap);
        if (r.N == 160) large.push_back(r.q_delta_gap);
    }
    if (small.size() < 100 || large.size() < 100) return {false, "missing converged trials"};
    int wins = 0;
    for (int b = 0; b < 20; ++b) {
        const std::vector<double> a(small.begin() + 5 * b, small.begin() + 5 * b + 5);
        const std::vector<double> c(large.begin() + 5 * b, large.begin() + 5 * b + 5);
        wins += median(c) < median(a) ? 1 : 0;
    }
    return {wins >= 16, std::to_string(wins) + "/20 batches decrease"};
}

Outcome check_battery() {
    const auto t0 = Clock::now();
    int all = 0, trace = 0, smallest = 0, conc = 0, gauss = 0;
    for (std::uint64_t s = 1; s <= 50; ++s) {
        const bool a = check_trace_lemma(100, 300, 1, s, 1.0).passed;
        const bool b = check_smallest_eigenvalue(50, 150, 5, s).passed;
        const bool c = check_concentration(std::vector<double>(100, 0.01), {1.5, 2.0, 3.0, 5.0}, 100000, s).passed;
        const bool d = check_gaussian_equivalence(200, 600, 5, s).passed;
        trace += a;
        smallest += b;
        conc += c;
        gauss += d;
        all += a && b && c && d;
    }
    const double secs = elapsed_since(t0);
    std::ostringstream d;
    d << "all four " << all << "/50; trace " << trace << ", smallest " << smallest << ", concentration " << conc
      << ", gaussian " << gauss;
    if (conc < 48) {
        // P[Gamma(100, 0.01) > 1.5] = 5.9e-6 exactly, far above the bound.
        d << "; concentration bound at t=1.5 is "
          << fmt("%.1e", exponential_tail_bound(std::vector<double>(100, 0.01), 1.5))
          << " against an exact tail of 5.9e-6, so hits there are genuine violations";
    }
    return {all >= 48 && secs < 300.0, d.str()};
}

Outcome brute_force() {
    Matrix y(1, 2);
    y << Complex(1.0, 0.0), Complex(1.0, 0.0);
    const auto obs = make_observation_set(y, Vector::Ones(2), Matrix::Zero(1, 1));
    const auto r = solve_maronna(obs, WeightFamily::shifted_inverse(0.5, 0.5));
    const oracle::Weights o{0.5, 0.5};
    const double z = oracle::grid_argmin_abs([&](double x) { return x - o.u(1.0 / x); }, 0.0, 10.0, 1e-6, 4);
    const double scalar_err = std::abs(r.C_hat(0, 0).real() - z);

    const DiscreteMeasure nu({0.5, 1.5}, {0.5, 0.5});
    const auto w = WeightFamily::shifted_inverse(0.5, 1.0 / 3.0);
    const auto cg = solve_chi_gamma_infinity(DiscreteMeasure::point_mass(1.0), nu, w);
    const oracle::ChiGammaSystem sys{{0.5, 1.0 / 3.0}, {1.0}, {1.0}, {0.5, 1.5}, {0.5, 0.5}};
    const auto [x, g] = oracle::grid_argmin_2d([&](double a, double b) { return sys.residual(a, b); }, 5.0, 1e-3, 5);
    const double pair_err = std::max(std::abs(cg.chi - x), std::abs(cg.gamma - g));
    return {scalar_err <= 1e-6 && pair_err <= 1e-5,
            "scalar error " + fmt("%.2e", scalar_err) + ", (chi, gamma) error " + fmt("%.2e", pair_err)};
}

}  // namespace

int main() {
    report(1, "psi/(1+c psi) = phi(g^-1) on a log grid", weight_identity);
    report(2, "degenerate closed forms", degenerate);
    report(3, "Maronna fixed-point residual and v(q) rewriting", fixed_point_residual);
    report(4, "five random initialisations agree", uniqueness);
    report(5, "delta_j = chi + tau_j gamma", affine_delta);
    report(6, "interference axioms on 100 probes", interference);
    report(7, "MSE decreases over N = 20..160", paper_trend);
    report(8, "median q/delta gap decreases from N = 40 to 160", proof_pivot);
    report(9, "check battery pass rate over 50 seeds", check_battery);
    report(10, "brute-force oracles", brute_force);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
