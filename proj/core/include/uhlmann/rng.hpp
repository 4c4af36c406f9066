#pragma once

#include <cstdint>
#include <random>

#include "uhlmann/matcore.hpp"

namespace uhlmann::rng {

/// SplitMix64 step; used to derive independent stream seeds from a user
/// seed plus a stream index, so chunked work is reproducible for any
/// worker count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

/// Uniform double in [0,1) from the top 53 bits of an engine draw. The
/// mt19937_64 output sequence is pinned by the standard, so this is
/// bit-identical everywhere (std::uniform_real_distribution is not).
inline double canonical(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on canonical draws (deterministic).
double gaussian(std::mt19937_64& eng);

/// Matrix with independent standard complex Gaussian entries.
CMatrix complex_gaussian(Eigen::Index n, std::mt19937_64& eng);

HermitianMatrix random_hermitian(Eigen::Index n, std::mt19937_64& eng);

/// Traceless Hermitian matrix, e.g. a valid state derivative.
HermitianMatrix random_traceless_hermitian(Eigen::Index n, std::mt19937_64& eng);

/// Strictly positive unit-trace state. `floor` biases the spectrum away
/// from zero: rho = (G G^dag + floor * n * I) normalized.
DensityMatrix random_density(Eigen::Index n, std::mt19937_64& eng, double floor = 0.1);

/// Haar-ish random unitary (QR of a complex Gaussian).
CMatrix random_unitary(Eigen::Index n, std::mt19937_64& eng);

/// Skew-Hermitian matrix G = (T - T^dag)/2 with Gaussian T.
CMatrix random_skew_hermitian(Eigen::Index n, std::mt19937_64& eng);

}  // namespace uhlmann::rng
