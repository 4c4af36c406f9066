#include "uhlmann/transport.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <sstream>

#include "uhlmann/rng.hpp"

namespace uhlmann {

Amplitude::Amplitude(const CMatrix& w, const Tolerances& tol) : w_(w) {
    if (w_.rows() != w_.cols() || w_.rows() < 1) {
        throw InputError("Amplitude: matrix must be square");
    }
    const double tr = (w_ * w_.adjoint()).trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream msg;
        msg << "Amplitude: |Tr W W^dag - 1| = " << std::abs(tr - 1.0)
            << " exceeds trace_tol " << tol.trace;
        throw InputError(msg.str());
    }
    // Projection validity (incl. invertibility) is delegated to DensityMatrix.
    DensityMatrix(w_ * w_.adjoint(), tol);
}

DensityMatrix Amplitude::project(const Tolerances& tol) const {
    return DensityMatrix(w_ * w_.adjoint(), tol);
}

Amplitude positive_amplitude(const DensityMatrix& rho) {
    return Amplitude(sqrt_psd(rho));
}

CurvePath::CurvePath(const ParametricModel& model, std::vector<RVector> waypoints)
    : model_(&model), waypoints_(std::move(waypoints)) {
    if (waypoints_.size() < 2) {
        throw InputError("CurvePath: at least 2 waypoints required");
    }
    for (const auto& w : waypoints_) {
        require_in_domain(model, w);
    }
}

RVector CurvePath::theta_at(double t) const {
    t = std::min(std::max(t, 0.0), 1.0);
    const int k = segments();
    const double scaled = t * k;
    int seg = std::min(static_cast<int>(scaled), k - 1);
    const double s = scaled - seg;
    return waypoints_[static_cast<size_t>(seg)] +
           s * (waypoints_[static_cast<size_t>(seg) + 1] -
                waypoints_[static_cast<size_t>(seg)]);
}

CurvePath CurvePath::reversed() const {
    std::vector<RVector> rev(waypoints_.rbegin(), waypoints_.rend());
    return CurvePath(*model_, std::move(rev));
}

namespace {

/// 1/2 L W at local segment coordinate s, for segment displacement dtheta.
CMatrix lift_slope(const ParametricModel& model, const RVector& base, const RVector& dtheta,
                   double s, const CMatrix& w, const Tolerances& tol) {
    const RVector theta = base + s * dtheta;
    const DensityMatrix rho = model.evaluate(theta);
    CMatrix drho = CMatrix::Zero(rho.dim(), rho.dim());
    for (int i = 0; i < model.param_dim(); ++i) {
        if (dtheta(i) != 0.0) {
            drho += dtheta(i) * derivative(model, theta, i).mat();
        }
    }
    const HermitianMatrix l = solve_sld(rho, HermitianMatrix(drho), tol);
    return 0.5 * l.mat() * w;
}

}  // namespace

TransportResult horizontal_lift(const CurvePath& path, const Amplitude& w0,
                                const TransportOptions& opts) {
    if (opts.steps < 16) {
        throw InputError("horizontal_lift: steps must be >= 16");
    }
    const ParametricModel& model = path.model();
    const DensityMatrix rho0 = model.evaluate(path.theta_at(0.0));
    if ((w0.mat() * w0.mat().adjoint() - rho0.mat()).norm() > 1e-8) {
        throw InputError("horizontal_lift: pi(w0) does not match rho at the path start");
    }

    const int n_seg = path.segments();
    const int per_seg = (opts.steps + n_seg - 1) / n_seg;
    const int total_steps = per_seg * n_seg;

    TransportResult out{w0};
    out.steps = total_steps;
    int sample_every = 1;
    if (opts.record_trajectory) {
        sample_every = std::max(1, total_steps / std::max(1, opts.trajectory_samples - 1));
        out.trajectory.emplace_back(0.0, w0);
    }

    CMatrix w = w0.mat();
    int global_step = 0;
    for (int seg = 0; seg < n_seg; ++seg) {
        const RVector& base = path.waypoints()[static_cast<size_t>(seg)];
        const RVector dtheta =
            path.waypoints()[static_cast<size_t>(seg) + 1] - base;
        const double h = 1.0 / per_seg;
        for (int step = 0; step < per_seg; ++step) {
            const double s = step * h;
            const CMatrix k1 = lift_slope(model, base, dtheta, s, w, opts.tol);
            const CMatrix k2 =
                lift_slope(model, base, dtheta, s + 0.5 * h, w + 0.5 * h * k1, opts.tol);
            const CMatrix k3 =
                lift_slope(model, base, dtheta, s + 0.5 * h, w + 0.5 * h * k2, opts.tol);
            const CMatrix k4 = lift_slope(model, base, dtheta, s + h, w + h * k3, opts.tol);
            w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            w /= std::sqrt((w * w.adjoint()).trace().real());
            ++global_step;
            if (opts.record_trajectory &&
                (global_step % sample_every == 0 || global_step == total_steps)) {
                const double t = static_cast<double>(global_step) / total_steps;
                out.trajectory.emplace_back(t, Amplitude(w, opts.tol));
            }
        }
    }

    const DensityMatrix rho1 = model.evaluate(path.theta_at(1.0));
    out.defect = (w * w.adjoint() - rho1.mat()).norm();
    if (out.defect > opts.tol.lift_defect) {
        std::ostringstream msg;
        msg << "horizontal_lift: end-point projection defect " << out.defect
            << " exceeds tolerance " << opts.tol.lift_defect << " at " << total_steps
            << " steps; increase the step count";
        throw ConvergenceError(msg.str());
    }
    out.w_end = Amplitude(w, opts.tol);
    return out;
}

Amplitude reference_amplitude(const Amplitude& w0, const DensityMatrix& rho1) {
    const CMatrix root = sqrt_psd(rho1);
    const PolarResult polar = polar_positive(w0.mat().adjoint() * root);
    return Amplitude(root * polar.k.adjoint());
}

TransportResult relative_phase_factor(const CurvePath& path, const Amplitude& w0,
                                      const TransportOptions& opts) {
    TransportResult out = horizontal_lift(path, w0, opts);
    const DensityMatrix rho1 = path.model().evaluate(path.theta_at(1.0));
    const Amplitude w1_ref = reference_amplitude(w0, rho1);
    const CMatrix u = Eigen::PartialPivLU<CMatrix>(w1_ref.mat()).solve(out.w_end.mat());
    out.rpf = u;
    out.rpf_unitarity_defect = (u.adjoint() * u - identity(u.rows())).norm();
    out.rpf_distance_to_identity = (u - identity(u.rows())).norm();
    out.rpf_vanishes = out.rpf_distance_to_identity <= opts.tol.rpf_vanish;
    return out;
}

namespace {

CMatrix loop_rpf(const ParametricModel& model, const RVector& theta, int i, int j, double d,
                 int steps, const Tolerances& tol) {
    RVector ei = RVector::Zero(model.param_dim());
    RVector ej = RVector::Zero(model.param_dim());
    ei(i) = d;
    ej(j) = d;
    const CurvePath loop(model,
                         {theta, theta + ei, theta + ei + ej, theta + ej, theta});
    TransportOptions opts;
    opts.steps = steps;
    opts.tol = tol;
    const Amplitude w0 = positive_amplitude(model.evaluate(theta));
    return *relative_phase_factor(loop, w0, opts).rpf;
}

}  // namespace

PlaquetteReport plaquette_check(const ParametricModel& model, const RVector& theta, int i,
                                int j, double dtheta, int steps, const Tolerances& tol) {
    if (i == j || i < 0 || j < 0 || i >= model.param_dim() || j >= model.param_dim()) {
        throw InputError("plaquette_check: need two distinct parameter indices");
    }
    if (!(dtheta > 0.0)) {
        throw InputError("plaquette_check: dtheta must be positive");
    }

    PlaquetteReport r;
    r.theta = theta;
    r.i = i;
    r.j = j;
    r.dtheta = dtheta;
    r.steps = steps;
    r.f_ij = curvature(model, theta, tol).at(i, j);

    const Amplitude w0 = positive_amplitude(model.evaluate(theta));
    const Eigen::PartialPivLU<CMatrix> w0_lu(w0.mat());
    const auto predicted_at = [&](double d) {
        return (identity(w0.dim()) + 0.5 * d * d * w0_lu.solve(r.f_ij * w0.mat())).eval();
    };

    r.loop_rpf = loop_rpf(model, theta, i, j, dtheta, steps, tol);
    r.predicted = predicted_at(dtheta);
    r.residual = (r.loop_rpf - r.predicted).norm();

    const CMatrix half = loop_rpf(model, theta, i, j, 0.5 * dtheta, steps, tol);
    r.residual_half = (half - predicted_at(0.5 * dtheta)).norm();
    r.decay_ratio = r.residual / std::max(r.residual_half, 1e-300);
    r.third_order = r.decay_ratio >= 6.0;
    return r;
}

FiberMinReport fiber_min_check(const ParametricModel& model, const RVector& theta,
                               const RVector& direction, int trials, std::uint64_t seed,
                               const Tolerances& tol) {
    if (direction.size() != model.param_dim() || direction.norm() == 0.0) {
        throw InputError("fiber_min_check: direction must be nonzero of dimension m");
    }
    const SldSet s = sld_set(model, theta, tol);
    const DensityMatrix rho = model.evaluate(theta);
    CMatrix drho = CMatrix::Zero(rho.dim(), rho.dim());
    for (int k = 0; k < model.param_dim(); ++k) {
        drho += direction(k) * derivative(model, theta, k).mat();
    }
    const HermitianMatrix l = solve_sld(rho, HermitianMatrix(drho), tol);

    const CMatrix w0 = sqrt_psd(rho);
    const CMatrix wdot = 0.5 * l.mat() * w0;
    const double horizontal = 4.0 * (wdot * wdot.adjoint()).trace().real();

    FiberMinReport r;
    r.theta = theta;
    r.direction = direction;
    r.horizontal_value = horizontal;
    r.quadratic_form = direction.dot(s.fisher * direction);
    r.identity_defect = std::abs(r.horizontal_value - r.quadratic_form);
    r.trials = trials;
    r.seed = seed;
    r.min_excess = trials > 0 ? std::numeric_limits<double>::infinity() : 0.0;

    std::mt19937_64 eng(rng::derive_seed(seed, 0));
    for (int t = 0; t < trials; ++t) {
        const CMatrix g = rng::random_skew_hermitian(rho.dim(), eng);
        const CMatrix wp = wdot + w0 * g;
        const double v = 4.0 * (wp * wp.adjoint()).trace().real();
        r.min_excess = std::min(r.min_excess, v - horizontal);
    }
    r.all_above = r.min_excess >= -1e-10;
    return r;
}

}  // namespace uhlmann
