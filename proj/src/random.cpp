#include "robscatter/random.hpp"

#include <cmath>

namespace robscatter {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

Complex complex_gaussian(Rng& rng) {
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    const double re = half(rng);
    const double im = half(rng);
    return {re, im};
}

ComplexVector complex_gaussian_vector(Index dim, Rng& rng) {
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    ComplexVector out(dim);
    for (Index k = 0; k < dim; ++k) {
        const double re = half(rng);
        const double im = half(rng);
        out(k) = Complex(re, im);
    }
    return out;
}

ComplexVector sphere_vector(Index dim, Rng& rng) {
    ComplexVector g = complex_gaussian_vector(dim, rng);
    double norm = g.norm();
    while (norm == 0.0) {
        g = complex_gaussian_vector(dim, rng);
        norm = g.norm();
    }
    return (std::sqrt(static_cast<double>(dim)) / norm) * g;
}

}  // namespace robscatter
