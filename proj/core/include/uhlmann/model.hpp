#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uhlmann/matcore.hpp"

namespace uhlmann {

struct DomainViolation {
    int coordinate;  ///< offending coordinate, or -1 for a joint constraint
    std::string message;
};

/// Open parameter domain Theta. Concrete shapes are boxes, balls and the
/// probability simplex; general manifold charts are out of scope.
class Domain {
  public:
    virtual ~Domain() = default;
    virtual int dim() const = 0;
    virtual std::optional<DomainViolation> violation(const RVector& theta) const = 0;
    /// Nearest-ish interior point at the given margin from the boundary.
    virtual RVector clamp_interior(const RVector& theta, double margin) const = 0;
    /// Per-coordinate bounds enclosing the domain (used to lay out grids).
    virtual std::pair<RVector, RVector> bounding_box() const = 0;
    virtual std::string describe() const = 0;
};

class BoxDomain : public Domain {
  public:
    BoxDomain(RVector lo, RVector hi);
    int dim() const override { return static_cast<int>(lo_.size()); }
    std::optional<DomainViolation> violation(const RVector& theta) const override;
    RVector clamp_interior(const RVector& theta, double margin) const override;
    std::pair<RVector, RVector> bounding_box() const override { return {lo_, hi_}; }
    std::string describe() const override;
    const RVector& lo() const { return lo_; }
    const RVector& hi() const { return hi_; }

  private:
    RVector lo_, hi_;
};

class BallDomain : public Domain {
  public:
    BallDomain(int dim, double radius) : dim_(dim), radius_(radius) {}
    int dim() const override { return dim_; }
    std::optional<DomainViolation> violation(const RVector& theta) const override;
    RVector clamp_interior(const RVector& theta, double margin) const override;
    std::pair<RVector, RVector> bounding_box() const override {
        return {RVector::Constant(dim_, -radius_), RVector::Constant(dim_, radius_)};
    }
    std::string describe() const override;
    double radius() const { return radius_; }

  private:
    int dim_;
    double radius_;
};

/// Open simplex: theta_i > 0 and sum theta < 1 (the omitted last weight).
class SimplexDomain : public Domain {
  public:
    explicit SimplexDomain(int dim) : dim_(dim) {}
    int dim() const override { return dim_; }
    std::optional<DomainViolation> violation(const RVector& theta) const override;
    RVector clamp_interior(const RVector& theta, double margin) const override;
    std::pair<RVector, RVector> bounding_box() const override {
        return {RVector::Constant(dim_, 0.0), RVector::Constant(dim_, 1.0)};
    }
    std::string describe() const override;

  private:
    int dim_;
};

/// A parametric family of strictly positive states theta -> rho(theta)
/// with derivative access. Models are immutable after construction;
/// evaluate/derivative are pure and safe to call concurrently.
class ParametricModel {
  public:
    virtual ~ParametricModel() = default;

    virtual std::string name() const = 0;
    virtual int state_dim() const = 0;
    virtual const Domain& domain() const = 0;
    int param_dim() const { return domain().dim(); }

    /// Validates theta against the domain, then evaluates. Throws
    /// DomainError naming the violated coordinate.
    DensityMatrix evaluate(const RVector& theta) const;

    virtual bool has_analytic_derivative() const { return false; }
    virtual HermitianMatrix analytic_derivative(const RVector& theta, int i) const;

    /// Finite-difference step for coordinate i. Grid-backed models override
    /// this with their lattice step.
    virtual double fd_step(const RVector& theta, int i) const;

  protected:
    virtual DensityMatrix evaluate_unchecked(const RVector& theta) const = 0;
};

/// Throws DomainError if theta is outside the model domain.
void require_in_domain(const ParametricModel& model, const RVector& theta);

/// d rho / d theta^i: the analytic derivative when the model provides one,
/// otherwise a central difference with the model's step. Either way the
/// result is symmetrized to exact Hermitian and projected to traceless.
HermitianMatrix derivative(const ParametricModel& model, const RVector& theta, int i);

/// rho(theta) = M(theta) rho0 M(theta) with commuting Hermitian factors
/// M(theta) = exp(sum theta^i X_i / 2) / sqrt(Tr rho0 exp(sum theta^i X_i)).
/// The generators must commute pairwise.
class ParallelExpModel : public ParametricModel {
  public:
    ParallelExpModel(std::vector<HermitianMatrix> generators, DensityMatrix base_state,
                     double box_radius = 1.5);

    std::string name() const override { return "parallel_exp"; }
    int state_dim() const override { return static_cast<int>(base_state_.dim()); }
    const Domain& domain() const override { return domain_; }
    bool has_analytic_derivative() const override { return true; }
    HermitianMatrix analytic_derivative(const RVector& theta, int i) const override;

    /// The Hermitian factor M(theta).
    HermitianMatrix factor(const RVector& theta) const;
    const std::vector<HermitianMatrix>& generators() const { return generators_; }
    const DensityMatrix& base_state() const { return base_state_; }

  protected:
    DensityMatrix evaluate_unchecked(const RVector& theta) const override;

  private:
    CMatrix generator_sum(const RVector& theta) const;
    std::vector<HermitianMatrix> generators_;
    DensityMatrix base_state_;
    BoxDomain domain_;
};

}  // namespace uhlmann
