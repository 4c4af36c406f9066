#include <doctest.h>

#include <random>

#include "uhlmann/rng.hpp"
#include "uhlmann/transport.hpp"
#include "uhlmann/zoo.hpp"

using namespace uhlmann;

namespace {

RVector vec3(double x, double y, double z) {
    RVector v(3);
    v << x, y, z;
    return v;
}

RVector vec1(double x) { return RVector::Constant(1, x); }

}  // namespace

TEST_CASE("constant path transports trivially") {
    const auto model = make_bloch_full();
    const RVector theta = vec3(0.2, 0.1, 0.0);
    const CurvePath path(*model, {theta, theta});
    const Amplitude w0 = positive_amplitude(model->evaluate(theta));
    const TransportResult r = horizontal_lift(path, w0);
    CHECK((r.w_end.mat() - w0.mat()).norm() <= 1e-14);
    CHECK(r.defect <= 1e-14);

    const TransportResult with_rpf = relative_phase_factor(path, w0);
    CHECK((*with_rpf.rpf - identity(2)).norm() <= 1e-12);
    CHECK(with_rpf.rpf_vanishes);
}

TEST_CASE("diagonal family lift matches the closed-form solution") {
    // All matrices commute, so W(t) = sqrt(rho(t)) exactly.
    const auto model = make_classical_simplex(2);
    const CurvePath path(*model, {vec1(0.3), vec1(0.5)});
    const Amplitude w0 = positive_amplitude(model->evaluate(vec1(0.3)));
    const TransportResult r = horizontal_lift(path, w0);
    const CMatrix expected = sqrt_psd(model->evaluate(vec1(0.5)));
    CHECK((r.w_end.mat() - expected).norm() <= 1e-9);
    CHECK(r.w_end.mat()(0, 1) == Complex(0, 0));
}

TEST_CASE("lift converges at fourth order") {
    const auto model = make_bloch_full();
    const CurvePath path(*model, {vec3(0.1, 0.0, 0.0), vec3(0.5, 0.4, 0.0)});
    const Amplitude w0 = positive_amplitude(model->evaluate(vec3(0.1, 0.0, 0.0)));

    TransportOptions opts;
    opts.steps = 4096;
    const CMatrix reference = horizontal_lift(path, w0, opts).w_end.mat();

    const auto error_at = [&](int steps) {
        TransportOptions o;
        o.steps = steps;
        return (horizontal_lift(path, w0, o).w_end.mat() - reference).norm();
    };
    const double e64 = error_at(64);
    const double e128 = error_at(128);
    const double ratio = e64 / e128;
    CHECK(ratio >= 10.0);
    CHECK(ratio <= 24.0);
}

TEST_CASE("lift preserves normalization and fibering along the way") {
    const auto model = make_bloch_full();
    const CurvePath path(*model, {vec3(0.4, 0, 0), vec3(0, 0.4, 0), vec3(0, 0, 0.4)});
    const Amplitude w0 = positive_amplitude(model->evaluate(vec3(0.4, 0, 0)));
    TransportOptions opts;
    opts.record_trajectory = true;
    opts.trajectory_samples = 17;
    const TransportResult r = horizontal_lift(path, w0, opts);
    CHECK(r.defect <= 1e-6);
    for (const auto& [t, w] : r.trajectory) {
        CHECK(std::abs((w.mat() * w.mat().adjoint()).trace().real() - 1.0) <= 1e-10);
        const DensityMatrix rho = model->evaluate(path.theta_at(t));
        CHECK((w.mat() * w.mat().adjoint() - rho.mat()).norm() <= 1e-6);
    }
}

TEST_CASE("reference_amplitude aligns trivially when already aligned") {
    std::mt19937_64 eng(2);
    const DensityMatrix rho = rng::random_density(3, eng);
    const Amplitude w0 = positive_amplitude(rho);
    const Amplitude ref = reference_amplitude(w0, rho);
    CHECK((ref.mat() - w0.mat()).norm() <= 1e-12);

    // w0 = rho^(1/2) U stays fixed as well.
    const CMatrix u = rng::random_unitary(3, eng);
    const Amplitude w0u(sqrt_psd(rho) * u);
    const Amplitude refu = reference_amplitude(w0u, rho);
    CHECK((refu.mat() - w0u.mat()).norm() <= 1e-12);
}

TEST_CASE("reference_amplitude: projection and hermitian-psd overlap") {
    std::mt19937_64 eng(9);
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix rho0 = rng::random_density(3, eng);
        const DensityMatrix rho1 = rng::random_density(3, eng);
        const Amplitude w0(sqrt_psd(rho0) * rng::random_unitary(3, eng));
        const Amplitude ref = reference_amplitude(w0, rho1);
        CHECK((ref.mat() * ref.mat().adjoint() - rho1.mat()).norm() <= 1e-10);
        const CMatrix overlap = w0.mat().adjoint() * ref.mat();
        CHECK((overlap - overlap.adjoint()).norm() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (overlap + overlap.adjoint()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("rpf vanishes along quasi-classical paths") {
    const auto simplex = make_classical_simplex(2);
    const CurvePath spath(*simplex, {vec1(0.2), vec1(0.8), vec1(0.4)});
    const TransportResult sr =
        relative_phase_factor(spath, positive_amplitude(simplex->evaluate(vec1(0.2))));
    CHECK(sr.rpf_distance_to_identity <= 1e-6);

    const auto parallel = make_parallel_exp_two_qubit();
    RVector a(2), b(2), c(2);
    a << -0.5, 0.2;
    b << 0.6, -0.3;
    c << 0.1, 0.7;
    const CurvePath ppath(*parallel, {a, b, c});
    const TransportResult pr =
        relative_phase_factor(ppath, positive_amplitude(parallel->evaluate(a)));
    CHECK(pr.rpf_distance_to_identity <= 1e-6);
}

TEST_CASE("bloch equatorial loop has nonvanishing holonomy") {
    const auto model = make_bloch_full();
    const std::vector<RVector> loop = {vec3(0.5, 0, 0), vec3(0, 0.5, 0), vec3(-0.5, 0, 0),
                                       vec3(0, -0.5, 0), vec3(0.5, 0, 0)};
    const CurvePath path(*model, loop);
    const Amplitude w0 = positive_amplitude(model->evaluate(loop.front()));
    const TransportResult r = relative_phase_factor(path, w0);
    CHECK(r.rpf_distance_to_identity > 0.01);
    CHECK(r.rpf_unitarity_defect <= 1e-8);

    // Reversing the loop conjugate-transposes the holonomy.
    const TransportResult rev = relative_phase_factor(path.reversed(), w0);
    CHECK((*rev.rpf - r.rpf->adjoint()).norm() <= 1e-6);
}

TEST_CASE("plaquette expansion: flat family") {
    const auto model = make_classical_simplex(3);
    const PlaquetteReport r =
        plaquette_check(*model, RVector::Constant(2, 0.3), 0, 1, 1e-2, 256);
    CHECK(r.f_ij.norm() <= 1e-8);
    CHECK(r.residual <= 1e-8);
}

TEST_CASE("plaquette expansion: bloch center matches -i sigma_z to third order") {
    const auto model = make_bloch_full();
    const PlaquetteReport r = plaquette_check(*model, vec3(0, 0, 0), 0, 1, 1e-2, 512);
    CHECK((r.f_ij - Complex(0, -1) * pauli_z()).norm() <= 1e-4);
    // Holonomy approximately I - (i/2) sigma_z dtheta^2 at W0 = I/sqrt(2).
    const CMatrix expected =
        identity(2) - Complex(0, 0.5) * pauli_z() * (1e-2 * 1e-2);
    CHECK((r.loop_rpf - expected).norm() <= 5e-7);
    CHECK(r.decay_ratio >= 6.0);
    CHECK(r.third_order);
}

TEST_CASE("fiber minimization at the bloch center") {
    const auto model = make_bloch_full();
    const FiberMinReport r =
        fiber_min_check(*model, vec3(0, 0, 0), vec3(0, 0, 1), 100, 77);
    CHECK(r.horizontal_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.identity_defect <= 1e-8);
    CHECK(r.all_above);
    CHECK(r.min_excess >= -1e-10);
}

TEST_CASE("fiber minimization across the zoo") {
    std::mt19937_64 eng(31);
    const auto probe = [&](const ParametricModel& model) {
        RVector dir(model.param_dim());
        for (int i = 0; i < model.param_dim(); ++i) dir(i) = rng::gaussian(eng);
        const auto [lo, hi] = model.domain().bounding_box();
        RVector theta(model.param_dim());
        for (int i = 0; i < model.param_dim(); ++i) {
            theta(i) = 0.5 * (lo(i) + hi(i)) + 0.25 * (hi(i) - lo(i)) *
                                                   (2.0 * rng::canonical(eng) - 1.0);
        }
        const FiberMinReport r = fiber_min_check(model, theta, dir, 50, 123);
        CHECK(r.identity_defect <= 1e-8);
        CHECK(r.all_above);
    };
    probe(*make_bloch_full());
    probe(*make_classical_simplex(2));
    probe(*make_parallel_exp_two_qubit());
}

TEST_CASE("transport input validation") {
    const auto model = make_bloch_full();
    const CurvePath path(*model, {vec3(0.1, 0, 0), vec3(0.3, 0, 0)});
    const Amplitude w0 = positive_amplitude(model->evaluate(vec3(0.1, 0, 0)));

    TransportOptions few;
    few.steps = 8;
    CHECK_THROWS_AS(horizontal_lift(path, w0, few), InputError);

    const Amplitude wrong = positive_amplitude(model->evaluate(vec3(0.2, 0, 0)));
    CHECK_THROWS_AS(horizontal_lift(path, wrong), InputError);

    TransportOptions strict;
    strict.tol.lift_defect = 1e-16;
    CHECK_THROWS_AS(horizontal_lift(path, w0, strict), ConvergenceError);

    CHECK_THROWS_AS(CurvePath(*model, {vec3(0.1, 0, 0)}), InputError);
    CHECK_THROWS_AS(fiber_min_check(*model, vec3(0, 0, 0), RVector::Zero(3), 10, 1),
                    InputError);
    CHECK_THROWS_AS(plaquette_check(*model, vec3(0, 0, 0), 0, 0, 1e-2), InputError);
}
