#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uhlmann/geometry.hpp"
#include "uhlmann/model.hpp"

namespace uhlmann {

/// Finite-outcome measurement: psd elements summing to the identity.
class Povm {
  public:
    Povm(std::vector<std::string> labels, std::vector<HermitianMatrix> elements,
         double psd_tol = 1e-10, double completeness_tol = 1e-10);

    /// Rank-1 projective measurement onto the columns of a unitary basis;
    /// labels are "1".."n".
    static Povm projective(const CMatrix& basis);

    int size() const { return static_cast<int>(elements_.size()); }
    Eigen::Index dim() const { return elements_.front().dim(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<HermitianMatrix>& elements() const { return elements_; }

  private:
    std::vector<std::string> labels_;
    std::vector<HermitianMatrix> elements_;
};

/// Measurement plus the estimate attached to each outcome.
struct Estimator {
    Povm povm;
    std::vector<RVector> estimates;  ///< one vector of length m per outcome
};

/// p_xi = Tr rho M(xi), clipped into [0,1]; the probabilities must sum to
/// one within 1e-10.
RVector outcome_probabilities(const Povm& povm, const DensityMatrix& rho);

struct SimDiagResult {
    CMatrix basis;       ///< unitary; columns are common eigenvectors
    RMatrix eigenvalues; ///< m x n table: lambda_k(xi) = <xi|L_k|xi>
    double max_offdiag;  ///< worst normalized off-diagonal residual
};

/// Common eigenbasis of pairwise-commuting Hermitian matrices: diagonalize
/// a fixed-seed random real combination, then re-diagonalize degenerate
/// clusters per matrix. Non-commuting input (beyond tol) raises
/// TheoremViolationError naming the worst pair.
SimDiagResult simultaneous_diagonalize(const std::vector<HermitianMatrix>& matrices,
                                       double tol = default_tolerances().commutator);

/// The bound-attaining estimator at theta for a locally quasi-classical
/// model: projectors onto the common SLD eigenbasis, estimates
/// theta^j + sum_k [J^-1]_jk lambda_k(xi).
Estimator optimal_estimator(const ParametricModel& model, const RVector& theta,
                            const Tolerances& tol = default_tolerances());

struct UnbiasednessReport {
    double mean_defect;      ///< max_j |E[theta_hat^j] - theta^j|
    double jacobian_defect;  ///< max_ij |d_i E[theta_hat^j] - delta_ij|
    double h;                ///< central-difference step used
};

UnbiasednessReport check_locally_unbiased(const Estimator& est, const ParametricModel& model,
                                          const RVector& theta, double h = 1e-5);

struct CovarianceReport {
    RVector mean;
    RMatrix cov;
    RMatrix cr_bound;          ///< (J^S)^-1 at theta
    double gap_min_eig;        ///< smallest eigenvalue of cov - cr_bound
    long long samples;         ///< -1 means exact summation
    std::optional<RMatrix> std_errors;  ///< per-entry std error of cov (Monte Carlo)
};

/// Mean/covariance by exact summation over the finite outcome set.
CovarianceReport exact_covariance(const Estimator& est, const ParametricModel& model,
                                  const RVector& theta);

/// Resolves a worker count: `requested` if positive, else a small default;
/// either way capped by the UHLMANN_KIT_THREADS environment variable.
/// Worker count never changes any sampled result.
int resolve_worker_count(int requested = 0);

/// i.i.d. outcome draws, deterministic per (seed, n_samples): work is cut
/// into fixed 65536-sample chunks, chunk c seeded by derive_seed(seed, c),
/// so any worker count produces identical counts.
std::vector<long long> sample_outcomes(const Povm& povm, const DensityMatrix& rho,
                                       long long n_samples, std::uint64_t seed,
                                       int workers = 0);

/// Empirical covariance over n_samples draws; std errors from empirical
/// fourth moments (per entry, 1/sqrt(n) asymptotics).
CovarianceReport monte_carlo_covariance(const Estimator& est, const ParametricModel& model,
                                        const RVector& theta, long long n_samples,
                                        std::uint64_t seed, int workers = 0);

struct AdaptiveTrace {
    RVector stage1_estimate;   ///< sample mean of stage-1 estimates
    bool clamped = false;      ///< stage-1 estimate pulled back into the domain
    RVector stage1_used;       ///< the (possibly clamped) point driving stage 2
    std::optional<RVector> stage2_estimate;
    RVector final_estimate;
    std::optional<Estimator> stage2_estimator;
};

/// Two-stage adaptive estimation: measure n1 times with the optimal
/// estimator at theta_init, re-optimize at the stage-1 mean, measure n2
/// times. n2 = 0 returns the stage-1 estimate.
AdaptiveTrace two_stage_adaptive(const ParametricModel& model, const RVector& theta_true,
                                 const RVector& theta_init, long long n1, long long n2,
                                 std::uint64_t seed,
                                 const Tolerances& tol = default_tolerances());

/// Randomized locally unbiased estimator at theta: a random rank-1 POVM
/// with enough outcomes, estimates solved from the unbiasedness constraints
/// (minimum-norm least squares). Used to probe the covariance bound.
Estimator random_unbiased_estimator(const ParametricModel& model, const RVector& theta,
                                    std::uint64_t seed, int outcomes = 0);

/// CSV export of sampled counts: header "outcome,count" then one row per
/// outcome label.
std::string counts_csv(const Povm& povm, const std::vector<long long>& counts);

}  // namespace uhlmann
