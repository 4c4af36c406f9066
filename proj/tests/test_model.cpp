#include <doctest.h>

#include <random>

#include "uhlmann/rng.hpp"
#include "uhlmann/zoo.hpp"

using namespace uhlmann;

namespace {

RVector vec3(double x, double y, double z) {
    RVector v(3);
    v << x, y, z;
    return v;
}

/// Central-difference oracle, independent of the library's derivative path.
CMatrix central_difference(const ParametricModel& model, const RVector& theta, int i,
                           double h) {
    RVector plus = theta, minus = theta;
    plus(i) += h;
    minus(i) -= h;
    return (model.evaluate(plus).mat() - model.evaluate(minus).mat()) / (2.0 * h);
}

}  // namespace

TEST_CASE("bloch model evaluates to (I + theta.sigma)/2") {
    const auto model = make_bloch_full();
    CHECK(model->param_dim() == 3);
    CHECK(model->state_dim() == 2);

    const DensityMatrix center = model->evaluate(vec3(0, 0, 0));
    CHECK((center.mat() - 0.5 * identity(2)).norm() <= 1e-15);

    const DensityMatrix shifted = model->evaluate(vec3(0.5, 0, 0));
    const EigResult eig = eig_hermitian(shifted);
    CHECK(eig.eigenvalues(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(eig.eigenvalues(1) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("bloch model rejects points outside the open ball") {
    const auto model = make_bloch_full();
    CHECK_THROWS_WITH_AS(model->evaluate(vec3(1.2, 0, 0)), doctest::Contains("|theta|"),
                         DomainError);
}

TEST_CASE("classical_simplex evaluates to diag(theta, 1 - theta)") {
    const auto model = make_classical_simplex(2);
    const DensityMatrix rho = model->evaluate(RVector::Constant(1, 0.3));
    CHECK(rho.mat()(0, 0).real() == doctest::Approx(0.3));
    CHECK(rho.mat()(1, 1).real() == doctest::Approx(0.7));
    CHECK_THROWS_AS(model->evaluate(RVector::Constant(1, -0.1)), DomainError);
    CHECK_THROWS_AS(model->evaluate(RVector::Constant(1, 1.0)), DomainError);
}

TEST_CASE("bloch derivative is sigma_i / 2 everywhere") {
    const auto model = make_bloch_full();
    const HermitianMatrix d = derivative(*model, vec3(0.2, -0.1, 0.3), 0);
    CHECK((d.mat() - 0.5 * pauli_x()).norm() <= 1e-14);
}

TEST_CASE("parallel_exp derivative matches the hand-computed value at 0") {
    const auto model = make_parallel_exp_default();
    const RVector theta = RVector::Zero(1);
    const HermitianMatrix d = derivative(*model, theta, 0);
    // d rho = 1/2 {sz, rho0} - rho0 Tr(rho0 sz) = diag(0.42, -0.42)
    CMatrix expected(2, 2);
    expected << 0.42, 0, 0, -0.42;
    CHECK((d.mat() - expected).norm() <= 1e-12);

    const CMatrix fd = central_difference(*model, theta, 0, 1e-5);
    CHECK((d.mat() - fd).norm() <= 1e-9);
}

TEST_CASE("analytic derivatives agree with central differences on the zoo") {
    std::mt19937_64 eng(21);
    const auto check_model = [&](const ParametricModel& model, const RVector& theta) {
        for (int i = 0; i < model.param_dim(); ++i) {
            const HermitianMatrix d = derivative(model, theta, i);
            const CMatrix fd = central_difference(model, theta, i, 1e-5);
            CHECK((d.mat() - fd).norm() <= 1e-6);
        }
    };
    check_model(*make_bloch_full(), vec3(0.3, -0.2, 0.1));
    check_model(*make_bloch_equator2(), RVector::Constant(2, 0.25));
    check_model(*make_classical_simplex(3), RVector::Constant(2, 0.3));
    check_model(*make_parallel_exp_two_qubit(), RVector::Constant(2, 0.4));
}

TEST_CASE("derivative output is exactly Hermitian and traceless") {
    const auto model = make_parallel_exp_default();
    const RVector theta = RVector::Constant(1, 0.7);
    const HermitianMatrix d = derivative(*model, theta, 0);
    CHECK((d.mat() - d.mat().adjoint()).norm() == 0.0);
    CHECK(std::abs(d.mat().trace().real()) <= 1e-16);
    // The raw finite difference is already nearly traceless before projection.
    const CMatrix raw = central_difference(*model, theta, 0, 1e-5);
    CHECK(std::abs(raw.trace().real()) <= 1e-9);
}

TEST_CASE("derivative outside the domain raises DomainError") {
    const auto model = make_classical_simplex(2);
    CHECK_THROWS_AS(derivative(*model, RVector::Constant(1, 1.5), 0), DomainError);
}

TEST_CASE("every zoo model passes state invariants on a domain grid") {
    const auto probe = [](const ParametricModel& model, const RVector& lo,
                          const RVector& hi) {
        const int m = model.param_dim();
        std::vector<int> idx(static_cast<size_t>(m), 0);
        constexpr int kPoints = 5;
        while (true) {
            RVector theta(m);
            for (int i = 0; i < m; ++i) {
                theta(i) =
                    lo(i) + (hi(i) - lo(i)) * idx[static_cast<size_t>(i)] / (kPoints - 1);
            }
            if (!model.domain().violation(theta)) {
                CHECK_NOTHROW(model.evaluate(theta));  // ctor enforces invariants
            }
            int d = 0;
            while (d < m && ++idx[static_cast<size_t>(d)] == kPoints) {
                idx[static_cast<size_t>(d)] = 0;
                ++d;
            }
            if (d == m) break;
        }
    };
    probe(*make_bloch_full(), RVector::Constant(3, -0.4), RVector::Constant(3, 0.4));
    probe(*make_bloch_equator2(), RVector::Constant(2, -0.5), RVector::Constant(2, 0.5));
    probe(*make_classical_simplex(2), RVector::Constant(1, 0.05),
          RVector::Constant(1, 0.95));
    probe(*make_classical_simplex(3), RVector::Constant(2, 0.05),
          RVector::Constant(2, 0.45));
    probe(*make_parallel_exp_two_qubit(), RVector::Constant(2, -0.8),
          RVector::Constant(2, 0.8));
}

TEST_CASE("parallel_exp factors commute across parameter values") {
    const auto model = make_parallel_exp_two_qubit();
    std::mt19937_64 eng(33);
    for (int rep = 0; rep < 10; ++rep) {
        RVector t0(2), t1(2);
        for (int i = 0; i < 2; ++i) {
            t0(i) = 1.6 * (rng::canonical(eng) - 0.5);
            t1(i) = 1.6 * (rng::canonical(eng) - 0.5);
        }
        const HermitianMatrix m0 = model->factor(t0);
        const HermitianMatrix m1 = model->factor(t1);
        CHECK(comm_norm(m0.mat(), m1.mat()) <= 1e-10);
        // rho(theta) = M rho0 M literally.
        const CMatrix rebuilt = m0.mat() * model->base_state().mat() * m0.mat();
        CHECK((rebuilt - model->evaluate(t0).mat()).norm() <= 1e-12);
    }
}

TEST_CASE("parallel_exp rejects non-commuting generators") {
    CMatrix rho0(2, 2);
    rho0 << 0.6, 0, 0, 0.4;
    CHECK_THROWS_AS(make_parallel_exp({HermitianMatrix(pauli_x()), HermitianMatrix(pauli_y())},
                                      DensityMatrix(rho0)),
                    InputError);
}

TEST_CASE("zoo lookup") {
    CHECK(zoo("bloch_full")->param_dim() == 3);
    CHECK(zoo("classical_simplex", {.levels = 4})->state_dim() == 4);
    CHECK_THROWS_WITH_AS(zoo("does_not_exist"), doctest::Contains("valid names"),
                         InputError);
}
