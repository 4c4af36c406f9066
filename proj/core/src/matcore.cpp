#include "uhlmann/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <sstream>

namespace uhlmann {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return 2;
    if (dynamic_cast<const DomainError*>(&e)) return 3;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 4;
    if (dynamic_cast<const TheoremViolationError*>(&e)) return 5;
    return 1;
}

double fro_norm(const CMatrix& a) { return a.norm(); }

double fro_rel_dist(const CMatrix& a, const CMatrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix pauli_x() {
    CMatrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

CMatrix pauli_y() {
    CMatrix s(2, 2);
    s << 0, Complex(0, -1), Complex(0, 1), 0;
    return s;
}

CMatrix pauli_z() {
    CMatrix s(2, 2);
    s << 1, 0, 0, -1;
    return s;
}

HermitianMatrix::HermitianMatrix(const CMatrix& a, double hermiticity_tol) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw InputError("HermitianMatrix: matrix must be square with dim >= 1");
    }
    const double defect = (a - a.adjoint()).norm();
    if (defect > hermiticity_tol * std::max(1.0, a.norm())) {
        std::ostringstream msg;
        msg << "HermitianMatrix: anti-Hermitian defect " << defect
            << " exceeds hermiticity_tol " << hermiticity_tol;
        throw InputError(msg.str());
    }
    m_ = 0.5 * (a + a.adjoint().eval());
}

DensityMatrix::DensityMatrix(const CMatrix& a, const Tolerances& tol)
    : HermitianMatrix(a, tol.hermiticity) {
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream msg;
        msg << "DensityMatrix: |Tr - 1| = " << std::abs(tr - 1.0)
            << " exceeds trace_tol " << tol.trace;
        throw InputError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    min_eig_ = es.eigenvalues().minCoeff();
    if (min_eig_ <= tol.positivity_floor) {
        std::ostringstream msg;
        msg << "DensityMatrix: smallest eigenvalue " << min_eig_
            << " is not above positivity_floor " << tol.positivity_floor;
        throw InputError(msg.str());
    }
}

EigResult eig_hermitian(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat());
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("eig_hermitian: eigensolver did not converge");
    }
    return EigResult{es.eigenvalues(), es.eigenvectors()};
}

HermitianMatrix solve_sld(const DensityMatrix& rho, const HermitianMatrix& drho,
                          const Tolerances& tol) {
    if (rho.dim() != drho.dim()) {
        throw InputError("solve_sld: dimension mismatch between rho and drho");
    }
    const double tr = std::abs(drho.mat().trace().real());
    if (tr > 1e-8 * std::max(1.0, drho.mat().norm())) {
        std::ostringstream msg;
        msg << "solve_sld: drho must be traceless, |Tr drho| = " << tr;
        throw InputError(msg.str());
    }
    const EigResult eig = eig_hermitian(rho);
    if (eig.eigenvalues.minCoeff() <= tol.positivity_floor) {
        std::ostringstream msg;
        msg << "solve_sld: state eigenvalue " << eig.eigenvalues.minCoeff()
            << " at or below positivity_floor " << tol.positivity_floor;
        throw SingularStateError(msg.str());
    }
    const CMatrix& v = eig.eigenvectors;
    const CMatrix d = v.adjoint() * drho.mat() * v;
    CMatrix l(rho.dim(), rho.dim());
    for (Eigen::Index a = 0; a < rho.dim(); ++a) {
        for (Eigen::Index b = 0; b < rho.dim(); ++b) {
            l(a, b) = 2.0 * d(a, b) / (eig.eigenvalues(a) + eig.eigenvalues(b));
        }
    }
    CMatrix out = v * l * v.adjoint();
    out = 0.5 * (out + out.adjoint().eval());
    return HermitianMatrix(out, tol.hermiticity);
}

PolarResult polar_positive(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw InputError("polar_positive: matrix must be square");
    }
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector& sigma = svd.singularValues();
    const CMatrix p = svd.matrixU() * sigma.asDiagonal() * svd.matrixU().adjoint();
    const CMatrix k = svd.matrixU() * svd.matrixV().adjoint();
    const double cutoff = 1e-13 * std::max(1.0, sigma.maxCoeff());
    const bool deficient = sigma.minCoeff() < cutoff;
    return PolarResult{HermitianMatrix(p), k, deficient};
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InputError("commutator: dimension mismatch");
    }
    return a * b - b * a;
}

double comm_norm(const CMatrix& a, const CMatrix& b) {
    return commutator(a, b).norm() / std::max(1.0, a.norm() * b.norm());
}

CMatrix sqrt_psd(const HermitianMatrix& a) {
    const EigResult eig = eig_hermitian(a);
    RVector roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        roots(i) = std::sqrt(std::max(0.0, eig.eigenvalues(i)));
    }
    return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix expm_hermitian(const HermitianMatrix& a) {
    const EigResult eig = eig_hermitian(a);
    RVector exps = eig.eigenvalues.array().exp();
    return eig.eigenvectors * exps.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace uhlmann
