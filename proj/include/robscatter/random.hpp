#pragma once

#include <cstdint>
#include <random>

#include "robscatter/linalg.hpp"

namespace robscatter {

using Rng = std::mt19937_64;

/// Stable seed derivation (splitmix64 finaliser applied to a running mix).
/// Every downstream seed in the library is produced by this function, so a
/// (master, stream, index) triple maps to the same stream on every platform.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

/// Circular complex Gaussian with E|z|^2 = 1: real and imaginary parts N(0, 1/2).
Complex complex_gaussian(Rng& rng);

/// Vector of `dim` independent circular complex Gaussians.
ComplexVector complex_gaussian_vector(Index dim, Rng& rng);

/// Uniform direction on the sphere of radius sqrt(dim): sqrt(dim) g / |g|.
ComplexVector sphere_vector(Index dim, Rng& rng);

// Stream tags. Values are part of the reproducibility contract.
namespace streams {
inline constexpr std::uint64_t kTau = 0x7461753aULL;
inline constexpr std::uint64_t kColumn = 0x636f6c3aULL;
inline constexpr std::uint64_t kMixing = 0x6d69783aULL;
inline constexpr std::uint64_t kTrial = 0x74726c3aULL;
inline constexpr std::uint64_t kCheck = 0x63686b3aULL;
}  // namespace streams

}  // namespace robscatter
