#pragma once

#include <cmath>

#include "robscatter/linalg.hpp"

// Thresholds for the statistical checks. Calibration runs use
// `calibrate --seeds 50 --first-seed 1000` on the default battery; the
// observed spread (min / median / q95 / max) is listed next to each entry.
namespace robscatter::calibration {

// 3.5 kappa / sqrt(N), i.e. 0.35 at N = 100, kappa = 1.
// trace_lemma: 0.161 / 0.185 / 0.224 / 0.233
inline constexpr double kTraceLemmaConstant = 3.5;

// Lower floor eps0 on min_j lambda_1(Sigma_j); the report carries 1/lambda.
// smallest_eigenvalue (1/lambda, N=50, n=150): 4.06 / 4.47 / 4.85 / 5.07
inline constexpr double kSmallestEigenvalueFloor = 0.05;

// K_max on |Sigma| (signal rank N/2 plus unit noise, N=50, n=150).
// bounded_norm: 7.83 / 8.32 / 8.97 / 9.67
inline constexpr double kBoundedNormMax = 12.0;

// Wilson interval width for the Monte Carlo tail estimates.
inline constexpr double kConcentrationZ = 3.0;

// c / sqrt(N) with c chosen so the threshold is 0.2 at N = 200.
// gaussian_equivalence (N=200, n=600): 0.126 / 0.135 / 0.141 / 0.147
inline constexpr double kGaussianEquivalenceConstant = 0.2 * 14.142135623730951;

// c / sqrt(N) on max_j |(1/n) tr Sigma_j^{-1} - (1/n) tr T|.
// deterministic_equivalent (N=100, n=300): 0.0013 / 0.0038 / 0.0093 / 0.0120
inline constexpr double kDeterministicEquivalentConstant = 0.25;

inline double trace_lemma_threshold(Index N, double kappa) {
    return kTraceLemmaConstant * kappa / std::sqrt(static_cast<double>(N));
}

inline double gaussian_equivalence_threshold(Index N) {
    return kGaussianEquivalenceConstant / std::sqrt(static_cast<double>(N));
}

inline double deterministic_equivalent_threshold(Index N) {
    return kDeterministicEquivalentConstant / std::sqrt(static_cast<double>(N));
}

}  // namespace robscatter::calibration
