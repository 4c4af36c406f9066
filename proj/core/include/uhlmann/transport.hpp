#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "uhlmann/geometry.hpp"
#include "uhlmann/model.hpp"

namespace uhlmann {

/// A point W of the bundle over the strictly positive states: W invertible
/// with Tr W W^dag = 1; the state it lies over is pi(W) = W W^dag.
class Amplitude {
  public:
    explicit Amplitude(const CMatrix& w, const Tolerances& tol = default_tolerances());

    const CMatrix& mat() const { return w_; }
    Eigen::Index dim() const { return w_.rows(); }
    DensityMatrix project(const Tolerances& tol = default_tolerances()) const;

  private:
    CMatrix w_;
};

/// The canonical positive amplitude rho^(1/2) over rho.
Amplitude positive_amplitude(const DensityMatrix& rho);

/// Piecewise-linear curve in parameter space, traversed over t in [0,1]
/// with equal time per segment and uniform speed within each segment.
class CurvePath {
  public:
    CurvePath(const ParametricModel& model, std::vector<RVector> waypoints);

    const ParametricModel& model() const { return *model_; }
    const std::vector<RVector>& waypoints() const { return waypoints_; }
    int segments() const { return static_cast<int>(waypoints_.size()) - 1; }

    RVector theta_at(double t) const;
    /// Path reversed end to end.
    CurvePath reversed() const;

  private:
    const ParametricModel* model_;
    std::vector<RVector> waypoints_;
};

struct TransportOptions {
    int steps = 512;               ///< total fixed RK4 steps (split over segments)
    bool record_trajectory = false;
    int trajectory_samples = 33;
    Tolerances tol{};
};

struct TransportResult {
    Amplitude w_end;
    std::optional<CMatrix> rpf;          ///< unitary U with W(1) = W1_ref U
    double rpf_unitarity_defect = 0.0;   ///< ||U^dag U - I||_F
    bool rpf_vanishes = false;           ///< ||U - I||_F <= rpf tolerance
    double rpf_distance_to_identity = 0.0;
    std::vector<std::pair<double, Amplitude>> trajectory;
    int steps = 0;
    double defect = 0.0;  ///< ||pi(W(1)) - rho(theta(1))||_F
};

/// Integrates dW/dt = 1/2 L(t) W(t) with classical fixed-step RK4; L(t) is
/// the SLD of rho(theta(t)) along d rho/dt. Tr W W^dag is rescaled to one
/// once per step. Throws ConvergenceError if the end-point projection
/// defect exceeds the lift tolerance.
TransportResult horizontal_lift(const CurvePath& path, const Amplitude& w0,
                                const TransportOptions& opts = {});

/// The reference amplitude over rho1 aligned with w0: W1 = rho1^(1/2) K^dag
/// where polar_positive(w0^dag rho1^(1/2)) = (P, K). Then w0^dag W1 = P is
/// Hermitian positive semidefinite; the psd strengthening of the bare
/// Hermiticity condition makes W1 unique.
Amplitude reference_amplitude(const Amplitude& w0, const DensityMatrix& rho1);

/// Horizontal lift plus the relative phase factor U = W1_ref^(-1) W(1).
TransportResult relative_phase_factor(const CurvePath& path, const Amplitude& w0,
                                      const TransportOptions& opts = {});

/// Loop holonomy vs the second-order curvature expansion around one
/// rectangular plaquette theta -> +d e_i -> +d e_j -> back.
struct PlaquetteReport {
    RVector theta;
    int i, j;
    double dtheta;
    int steps;
    CMatrix loop_rpf;       ///< numeric holonomy at dtheta
    CMatrix predicted;      ///< I + 1/2 W0^(-1) F_ij W0 dtheta^2
    CMatrix f_ij;
    double residual;        ///< ||loop_rpf - predicted||_F at dtheta
    double residual_half;   ///< same at dtheta/2
    double decay_ratio;     ///< residual / residual_half
    bool third_order;       ///< decay_ratio >= 6
};

PlaquetteReport plaquette_check(const ParametricModel& model, const RVector& theta, int i,
                                int j, double dtheta, int steps = 512,
                                const Tolerances& tol = default_tolerances());

/// Checks the fiber-minimization identity: the horizontal velocity attains
/// J_t = min over the fiber of 4 Tr Wdot Wdot^dag, and random vertical
/// perturbations Wdot + W G (G skew-Hermitian) never fall below it.
struct FiberMinReport {
    RVector theta;
    RVector direction;
    double horizontal_value;  ///< 4 Tr Wdot Wdot^dag
    double quadratic_form;    ///< direction^T J direction
    double identity_defect;   ///< |horizontal_value - quadratic_form|
    int trials;
    double min_excess;        ///< min over trials of perturbed - horizontal
    bool all_above;           ///< min_excess >= -1e-10
    std::uint64_t seed;
};

FiberMinReport fiber_min_check(const ParametricModel& model, const RVector& theta,
                               const RVector& direction, int trials, std::uint64_t seed,
                               const Tolerances& tol = default_tolerances());

}  // namespace uhlmann
