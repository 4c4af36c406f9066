#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "uhlmann/errors.hpp"
#include "uhlmann/tolerances.hpp"

namespace uhlmann {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Frobenius norm.
double fro_norm(const CMatrix& a);

/// ||a - b||_F / max(1, ||b||_F). A unit floor keeps zero matrices safe.
double fro_rel_dist(const CMatrix& a, const CMatrix& b);

CMatrix identity(Eigen::Index n);
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// Hermitian matrix validated on construction: the anti-Hermitian defect
/// must satisfy ||A - A^dag||_F <= tol * max(1, ||A||_F). The stored matrix
/// is symmetrized exactly, so mat() == mat().adjoint() entrywise.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(const CMatrix& a,
                             double hermiticity_tol = default_tolerances().hermiticity);

    const CMatrix& mat() const { return m_; }
    operator const CMatrix&() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  protected:
    CMatrix m_;
};

/// Strictly positive, unit-trace Hermitian matrix (a state).
class DensityMatrix : public HermitianMatrix {
  public:
    explicit DensityMatrix(const CMatrix& a,
                           const Tolerances& tol = default_tolerances());

    double min_eigenvalue() const { return min_eig_; }

  private:
    double min_eig_;
};

struct EigResult {
    RVector eigenvalues;  ///< ascending
    CMatrix eigenvectors; ///< unitary, columns match eigenvalues
};

/// Eigendecomposition A = V diag(lambda) V^dag of a Hermitian matrix,
/// eigenvalues ascending.
EigResult eig_hermitian(const HermitianMatrix& a);

/// Solves drho = 1/2 (L rho + rho L) for Hermitian L in the eigenbasis of
/// rho: L_ab = 2 drho_ab / (lambda_a + lambda_b). Requires rho strictly
/// positive and drho traceless (it is the derivative of a unit-trace family).
HermitianMatrix solve_sld(const DensityMatrix& rho, const HermitianMatrix& drho,
                          const Tolerances& tol = default_tolerances());

struct PolarResult {
    HermitianMatrix p;   ///< positive semidefinite factor (A A^dag)^(1/2)
    CMatrix k;           ///< unitary factor, A = p * k
    bool rank_deficient; ///< smallest singular value below cutoff
};

/// Left polar decomposition A = P K with P = (A A^dag)^(1/2) psd, K unitary.
/// Unique when A is invertible.
PolarResult polar_positive(const CMatrix& a);

/// AB - BA. Dimensions must agree.
CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// ||AB - BA||_F / max(1, ||A||_F * ||B||_F), a scale-free commutation
/// measure suitable for thresholding.
double comm_norm(const CMatrix& a, const CMatrix& b);

/// Principal square root of a positive semidefinite Hermitian matrix.
CMatrix sqrt_psd(const HermitianMatrix& a);

/// exp(A) for Hermitian A, via eigendecomposition.
CMatrix expm_hermitian(const HermitianMatrix& a);

}  // namespace uhlmann
