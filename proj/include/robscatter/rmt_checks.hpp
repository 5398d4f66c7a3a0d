#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "robscatter/linalg.hpp"

namespace robscatter {

/// Outcome of one statistical check. passed == (statistic <= threshold).
struct CheckReport {
    std::string name;
    Index N = 0;
    Index n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

CheckReport make_report(std::string name, Index N, Index n, int trials, std::uint64_t seed, double statistic,
                        double threshold);

enum class TraceMatrixKind { RandomHermitian, Identity, Zero };

/**
 * Quadratic-form concentration: for z_j = [s_j; w_j] (s_j ~ CN(0, I_K),
 * w_j uniform on the radius-sqrt(N) sphere, K = max(1, N/2)) and matrices
 * A_j with |A_j| <= kappa drawn independently of z_j, measures
 * max_j |(1/N) z_j* A_j z_j - (1/N) tr A_j| over n vectors and all trials.
 */
CheckReport check_trace_lemma(Index N, Index n, int trials, std::uint64_t seed, double kappa,
                              TraceMatrixKind kind = TraceMatrixKind::RandomHermitian);

/// lambda_1(Sigma) and lambda_1(Sigma_j) for Sigma = (1/n) Y Y*, Sigma_j = Sigma - (1/n) y_j y_j*.
struct LeaveOneOutSpectrum {
    double lambda_min = 0.0;  ///< of Sigma
    double lambda_max = 0.0;  ///< of Sigma
    Vector lambda_min_loo;    ///< of each Sigma_j
};

/// Uses one eigendecomposition of Sigma and solves the rank-one secular
/// equation for each j.
LeaveOneOutSpectrum leave_one_out_spectrum(const Matrix& Y);

/**
 * Smallest leave-one-out eigenvalue of Sigma_j built from the signal plus
 * noise model with R_i = [A, I] (K = N/2, tau = 1). The statistic is
 * 1 / min_j lambda_1(Sigma_j), i.e. max_j |Sigma_j^{-1}|, compared with 1/eps0.
 */
CheckReport check_smallest_eigenvalue(Index N, Index n, int trials, std::uint64_t seed);

/// Same draws as check_smallest_eigenvalue; statistic max |Sigma| against K_max.
CheckReport check_bounded_norm(Index N, Index n, int trials, std::uint64_t seed);

/// C exp(-min(t^2 / (4 sum a^2), t / (4 max a))) with C = e^{1/2}.
double exponential_tail_bound(const std::vector<double>& alphas, double t);

/// Wilson score interval lower end for `hits` out of `trials` at z standard errors.
double wilson_lower(std::size_t hits, std::size_t trials, double z);

/**
 * Monte Carlo tail P[sum alpha_i gamma_i > t] with gamma_i ~ Exp(1) against
 * exponential_tail_bound. statistic = max over t of (Wilson lower end at
 * z = 3) - bound; the check passes when no grid point is violated.
 */
enum class TailEvent {
    Raw,       ///< sum_i alpha_i gamma_i > t
    Centered,  ///< sum_i alpha_i (gamma_i - 1) > t
};

CheckReport check_concentration(const std::vector<double>& alphas, const std::vector<double>& t_grid,
                                int trials, std::uint64_t seed, TailEvent event = TailEvent::Raw);

/// One draw of |Sigma - Sigma~| with the triangle-inequality ceiling
/// 2 eps sqrt(|S_s| |S_g|) + eps (2 + eps) |S_g|, eps = max_i |sqrt(N)/|g_i| - 1|.
struct GaussianEquivalenceSample {
    double gap = 0.0;
    double bound = 0.0;
};

GaussianEquivalenceSample gaussian_equivalence_sample(Index N, Index n, std::uint64_t seed,
                                                      bool normalize = true);

/// Median over trials of |Sigma - Sigma~| (normalised vs raw Gaussian noise).
CheckReport check_gaussian_equivalence(Index N, Index n, int trials, std::uint64_t seed,
                                       bool normalize = true);

/**
 * Deterministic-equivalent trace check: with R_i R_i* = (B + tau_i I)/(tau_i + eta)
 * (tau from the two-atom law {0.5, 1.5}, f = 1), measures
 * max_j |(1/n) tr Sigma_j^{-1} - (1/n) tr T| where T uses solve_e_system.
 */
CheckReport check_deterministic_equivalent(Index N, Index n, int trials, std::uint64_t seed);

/// The default battery at the calibrated sizes, one report per check.
std::vector<CheckReport> run_check_battery(std::uint64_t seed);

void write_check_csv_header(std::ostream& os);
void write_check_csv_row(std::ostream& os, const CheckReport& report);

}  // namespace robscatter
