#include "uhlmann/model.hpp"

#include <cmath>
#include <sstream>

namespace uhlmann {

BoxDomain::BoxDomain(RVector lo, RVector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.size() == 0) {
        throw InputError("BoxDomain: lo/hi must be nonempty and equally sized");
    }
    for (Eigen::Index i = 0; i < lo_.size(); ++i) {
        if (!(lo_(i) < hi_(i))) {
            throw InputError("BoxDomain: lo < hi must hold per coordinate");
        }
    }
}

std::optional<DomainViolation> BoxDomain::violation(const RVector& theta) const {
    if (theta.size() != lo_.size()) {
        return DomainViolation{-1, "theta has wrong dimension"};
    }
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        if (!(theta(i) > lo_(i) && theta(i) < hi_(i))) {
            std::ostringstream msg;
            msg << "coordinate " << i << " = " << theta(i) << " outside open interval ("
                << lo_(i) << ", " << hi_(i) << ")";
            return DomainViolation{static_cast<int>(i), msg.str()};
        }
    }
    return std::nullopt;
}

RVector BoxDomain::clamp_interior(const RVector& theta, double margin) const {
    RVector out = theta;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) = std::min(std::max(out(i), lo_(i) + margin), hi_(i) - margin);
    }
    return out;
}

std::string BoxDomain::describe() const {
    std::ostringstream s;
    s << "box";
    for (Eigen::Index i = 0; i < lo_.size(); ++i) {
        s << " (" << lo_(i) << ", " << hi_(i) << ")";
    }
    return s.str();
}

std::optional<DomainViolation> BallDomain::violation(const RVector& theta) const {
    if (theta.size() != dim_) {
        return DomainViolation{-1, "theta has wrong dimension"};
    }
    const double r = theta.norm();
    if (!(r < radius_)) {
        std::ostringstream msg;
        msg << "|theta| = " << r << " not inside open ball of radius " << radius_;
        return DomainViolation{-1, msg.str()};
    }
    return std::nullopt;
}

RVector BallDomain::clamp_interior(const RVector& theta, double margin) const {
    const double r = theta.norm();
    const double rmax = radius_ - margin;
    if (r <= rmax || r == 0.0) return theta;
    return theta * (rmax / r);
}

std::string BallDomain::describe() const {
    std::ostringstream s;
    s << "open ball |theta| < " << radius_;
    return s.str();
}

std::optional<DomainViolation> SimplexDomain::violation(const RVector& theta) const {
    if (theta.size() != dim_) {
        return DomainViolation{-1, "theta has wrong dimension"};
    }
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        if (!(theta(i) > 0.0)) {
            std::ostringstream msg;
            msg << "coordinate " << i << " = " << theta(i) << " must be positive";
            return DomainViolation{static_cast<int>(i), msg.str()};
        }
    }
    const double sum = theta.sum();
    if (!(sum < 1.0)) {
        std::ostringstream msg;
        msg << "sum theta = " << sum << " must be below 1";
        return DomainViolation{-1, msg.str()};
    }
    return std::nullopt;
}

RVector SimplexDomain::clamp_interior(const RVector& theta, double margin) const {
    RVector out = theta;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) = std::max(out(i), margin);
    }
    const double sum = out.sum();
    if (sum > 1.0 - margin) {
        out *= (1.0 - margin) / sum;
    }
    return out;
}

std::string SimplexDomain::describe() const {
    std::ostringstream s;
    s << "open simplex: theta_i > 0, sum theta < 1 (" << dim_ << " coordinates)";
    return s.str();
}

void require_in_domain(const ParametricModel& model, const RVector& theta) {
    if (auto v = model.domain().violation(theta)) {
        std::ostringstream msg;
        msg << model.name() << ": theta outside domain [" << model.domain().describe()
            << "]: " << v->message;
        throw DomainError(msg.str());
    }
}

DensityMatrix ParametricModel::evaluate(const RVector& theta) const {
    require_in_domain(*this, theta);
    return evaluate_unchecked(theta);
}

HermitianMatrix ParametricModel::analytic_derivative(const RVector&, int) const {
    throw InputError(name() + ": no analytic derivative available");
}

double ParametricModel::fd_step(const RVector& theta, int i) const {
    return 1e-5 * std::max(1.0, std::abs(theta(i)));
}

namespace {

HermitianMatrix symmetrize_traceless(CMatrix a) {
    a = 0.5 * (a + a.adjoint().eval());
    a -= (a.trace() / static_cast<double>(a.rows())) * identity(a.rows());
    return HermitianMatrix(a);
}

}  // namespace

HermitianMatrix derivative(const ParametricModel& model, const RVector& theta, int i) {
    if (i < 0 || i >= model.param_dim()) {
        throw InputError("derivative: parameter index out of range");
    }
    require_in_domain(model, theta);
    if (model.has_analytic_derivative()) {
        return symmetrize_traceless(model.analytic_derivative(theta, i).mat());
    }
    const double h = model.fd_step(theta, i);
    RVector plus = theta, minus = theta;
    plus(i) += h;
    minus(i) -= h;
    if (model.domain().violation(plus) || model.domain().violation(minus)) {
        std::ostringstream msg;
        msg << model.name() << ": central-difference stencil for coordinate " << i
            << " at step h = " << h << " leaves the domain; use a smaller h";
        throw DomainError(msg.str());
    }
    const CMatrix diff =
        (model.evaluate(plus).mat() - model.evaluate(minus).mat()) / (2.0 * h);
    return symmetrize_traceless(diff);
}

ParallelExpModel::ParallelExpModel(std::vector<HermitianMatrix> generators,
                                   DensityMatrix base_state, double box_radius)
    : generators_(std::move(generators)),
      base_state_(std::move(base_state)),
      domain_(RVector::Constant(std::max<size_t>(generators_.size(), 1), -box_radius),
              RVector::Constant(std::max<size_t>(generators_.size(), 1), box_radius)) {
    if (generators_.empty()) {
        throw InputError("parallel_exp: at least one generator required");
    }
    for (const auto& x : generators_) {
        if (x.dim() != base_state_.dim()) {
            throw InputError("parallel_exp: generator dimension mismatch with base state");
        }
    }
    for (size_t i = 0; i < generators_.size(); ++i) {
        for (size_t j = i + 1; j < generators_.size(); ++j) {
            const double c = comm_norm(generators_[i].mat(), generators_[j].mat());
            if (c > 1e-12) {
                std::ostringstream msg;
                msg << "parallel_exp: generators " << i << " and " << j
                    << " do not commute (comm_norm = " << c << ")";
                throw InputError(msg.str());
            }
        }
    }
}

CMatrix ParallelExpModel::generator_sum(const RVector& theta) const {
    CMatrix a = CMatrix::Zero(base_state_.dim(), base_state_.dim());
    for (size_t i = 0; i < generators_.size(); ++i) {
        a += theta(static_cast<Eigen::Index>(i)) * generators_[i].mat();
    }
    return a;
}

HermitianMatrix ParallelExpModel::factor(const RVector& theta) const {
    require_in_domain(*this, theta);
    const CMatrix a = generator_sum(theta);
    const CMatrix half = expm_hermitian(HermitianMatrix(0.5 * a));
    const double norm = (base_state_.mat() * half * half).trace().real();
    return HermitianMatrix(half / std::sqrt(norm));
}

DensityMatrix ParallelExpModel::evaluate_unchecked(const RVector& theta) const {
    const CMatrix m = factor(theta).mat();
    return DensityMatrix(m * base_state_.mat() * m);
}

HermitianMatrix ParallelExpModel::analytic_derivative(const RVector& theta, int i) const {
    // d rho = 1/2 (X_i rho + rho X_i) - rho Tr(rho X_i); exactly traceless.
    const CMatrix rho = evaluate_unchecked(theta).mat();
    const CMatrix& x = generators_[static_cast<size_t>(i)].mat();
    const double mean = (rho * x).trace().real();
    return HermitianMatrix(0.5 * (x * rho + rho * x) - mean * rho);
}

}  // namespace uhlmann
