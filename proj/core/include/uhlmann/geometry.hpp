#pragma once

#include <string>
#include <vector>

#include "uhlmann/model.hpp"

namespace uhlmann {

/// SLDs L_i(theta) and the Fisher matrix J_ij = Re Tr rho L_i L_j at a point.
struct SldSet {
    RVector theta;
    std::vector<HermitianMatrix> slds;
    RMatrix fisher;
};

SldSet sld_set(const ParametricModel& model, const RVector& theta,
               const Tolerances& tol = default_tolerances());

/// Curvature form F_ij = (d_i L_j - d_j L_i) - 1/2 [L_i, L_j], exactly
/// antisymmetric in (i, j) with zero diagonal.
class CurvatureTensor {
  public:
    CurvatureTensor(RVector theta, int m, Eigen::Index n);
    const RVector& theta() const { return theta_; }
    int param_dim() const { return m_; }
    const CMatrix& at(int i, int j) const;
    void set_pair(int i, int j, const CMatrix& f_ij);  // stores f_ij and -f_ij
    /// max_ij ||F_ij||_F
    double max_norm() const;

  private:
    RVector theta_;
    int m_;
    std::vector<CMatrix> f_;  // row-major m x m
};

/// d_i L_j by central differences of exact SLD solves at displaced theta.
CurvatureTensor curvature(const ParametricModel& model, const RVector& theta,
                          const Tolerances& tol = default_tolerances());

struct LocalClassification {
    bool commuting;          ///< max_{i<j} comm_norm(L_i, L_j) <= tol
    double worst_comm_norm;  ///< 0 when m == 1
    int worst_i, worst_j;    ///< -1 when m == 1
};

/// Locally quasi-classical test at one point.
LocalClassification classify_local(const ParametricModel& model, const RVector& theta,
                                   double tol = default_tolerances().commutator);

enum class Verdict {
    not_locally_quasi_classical,
    locally_quasi_classical,
    quasi_classical,  ///< equals the parallel verdict
};

std::string to_string(Verdict v);

struct CommutatorWitness {
    double value = 0.0;
    RVector theta0, theta1;  ///< equal for a same-point commutator
    int i = -1, j = -1;
};

struct CurvatureWitness {
    double value = 0.0;
    RVector theta;
    int i = -1, j = -1;
};

/// Sampled-grid classification. The continuous "for any theta" conditions
/// are checked on the supplied grid only; the grid is echoed so reports
/// disclose exactly what was examined.
struct Classification {
    Verdict verdict;
    CommutatorWitness worst_commutator;
    CurvatureWitness worst_curvature;
    std::vector<RVector> grid;
    int curvature_points_skipped = 0;  ///< grid points whose stencil left the domain
    double tol;
};

Classification classify_global(const ParametricModel& model,
                               const std::vector<RVector>& grid,
                               double tol = default_tolerances().commutator);

/// Both sides of the curvature/commutator equivalence at one point.
/// `consistent` is false only if one side vanishes (below its tolerance)
/// while the other exceeds 100x its tolerance.
struct Theorem2Report {
    RVector theta;
    double max_curvature_norm;  ///< absolute Frobenius
    double worst_comm_norm;     ///< scale-free
    double commutator_tol;
    double curvature_tol;
    bool curvature_vanishes;
    bool commutators_vanish;
    bool consistent;
};

Theorem2Report theorem2_check(const ParametricModel& model, const RVector& theta,
                              const Tolerances& tol = default_tolerances());

}  // namespace uhlmann
