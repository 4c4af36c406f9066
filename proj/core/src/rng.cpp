#include "uhlmann/rng.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

namespace uhlmann::rng {

double gaussian(std::mt19937_64& eng) {
    // Box-Muller; u1 nudged away from 0 so log stays finite.
    const double u1 = std::max(canonical(eng), 0x1.0p-60);
    const double u2 = canonical(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CMatrix complex_gaussian(Eigen::Index n, std::mt19937_64& eng) {
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = gaussian(eng);
            const double im = gaussian(eng);
            g(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    return g;
}

HermitianMatrix random_hermitian(Eigen::Index n, std::mt19937_64& eng) {
    const CMatrix g = complex_gaussian(n, eng);
    return HermitianMatrix(0.5 * (g + g.adjoint().eval()));
}

HermitianMatrix random_traceless_hermitian(Eigen::Index n, std::mt19937_64& eng) {
    CMatrix h = random_hermitian(n, eng).mat();
    h -= (h.trace() / static_cast<double>(n)) * identity(n);
    return HermitianMatrix(h);
}

DensityMatrix random_density(Eigen::Index n, std::mt19937_64& eng, double floor) {
    const CMatrix g = complex_gaussian(n, eng);
    CMatrix rho = g * g.adjoint() + floor * static_cast<double>(n) * identity(n);
    rho /= rho.trace().real();
    return DensityMatrix(rho);
}

CMatrix random_unitary(Eigen::Index n, std::mt19937_64& eng) {
    const CMatrix g = complex_gaussian(n, eng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    // Fix the phase convention so the factorization is unique-ish.
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

CMatrix random_skew_hermitian(Eigen::Index n, std::mt19937_64& eng) {
    const CMatrix t = complex_gaussian(n, eng);
    return 0.5 * (t - t.adjoint().eval());
}

}  // namespace uhlmann::rng
