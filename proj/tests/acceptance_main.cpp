// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "uhlmann/reports.hpp"
#include "uhlmann/rng.hpp"
#include "uhlmann/transport.hpp"
#include "uhlmann/zoo.hpp"

using namespace uhlmann;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

RVector vec3(double x, double y, double z) {
    RVector v(3);
    v << x, y, z;
    return v;
}

RVector interior_point(const ParametricModel& model, std::mt19937_64& eng, double scale) {
    const auto [lo, hi] = model.domain().bounding_box();
    while (true) {
        RVector theta(model.param_dim());
        for (int i = 0; i < model.param_dim(); ++i) {
            const double mid = 0.5 * (lo(i) + hi(i));
            const double half = 0.5 * (hi(i) - lo(i));
            theta(i) = mid + scale * half * (2.0 * rng::canonical(eng) - 1.0);
        }
        if (!model.domain().violation(theta)) return theta;
    }
}

// ---------------------------------------------------------------- criterion 1
Outcome sld_correctness() {
    const auto start = Clock::now();
    std::mt19937_64 eng(1001);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const Eigen::Index n = 2 + rep % 3;
        const DensityMatrix rho = rng::random_density(n, eng);
        const HermitianMatrix drho = rng::random_traceless_hermitian(n, eng);
        const HermitianMatrix l = solve_sld(rho, drho);
        const CMatrix lhs = 0.5 * (l.mat() * rho.mat() + rho.mat() * l.mat());
        worst = std::max(worst,
                         (lhs - drho.mat()).norm() / std::max(1.0, drho.mat().norm()));
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream detail;
    detail << "worst relative residual " << worst << " over 1000 pairs in " << seconds
           << " s";
    return Outcome{worst <= 1e-10 && seconds < 5.0, detail.str()};
}

// ---------------------------------------------------------------- criterion 2
Outcome fisher_sanity() {
    const SldSet bloch = sld_set(*make_bloch_full(), vec3(0, 0, 0));
    const double bloch_defect = (bloch.fisher - RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff();

    const auto simplex = make_classical_simplex(2);
    double simplex_defect = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double theta = 0.1 * k;
        const SldSet s = sld_set(*simplex, RVector::Constant(1, theta));
        simplex_defect = std::max(
            simplex_defect, std::abs(s.fisher(0, 0) - 1.0 / (theta * (1.0 - theta))));
    }
    std::ostringstream detail;
    detail << "bloch J(0) defect " << bloch_defect << ", Bernoulli defect "
           << simplex_defect;
    return Outcome{bloch_defect <= 1e-12 && simplex_defect <= 1e-8, detail.str()};
}

// ---------------------------------------------------------------- criterion 3
Outcome theorem2_equivalence() {
    struct Case {
        std::unique_ptr<ParametricModel> model;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    cases.push_back({make_bloch_full(), 31});
    cases.push_back({make_bloch_equator2(), 32});
    cases.push_back({make_classical_simplex(2), 33});
    cases.push_back({make_parallel_exp_two_qubit(), 34});

    int checked = 0;
    for (const auto& c : cases) {
        std::mt19937_64 eng(c.seed);
        for (int rep = 0; rep < 20; ++rep) {
            const RVector theta = interior_point(*c.model, eng, 0.7);
            const Theorem2Report r = theorem2_check(*c.model, theta);
            ++checked;
            if (!r.consistent) {
                std::ostringstream detail;
                detail << c.model->name() << " at theta " << theta.transpose()
                       << ": curvature " << r.max_curvature_norm << " vs commutator "
                       << r.worst_comm_norm;
                return Outcome{false, detail.str()};
            }
        }
    }
    std::ostringstream detail;
    detail << checked << " points consistent across 4 zoo models";
    return Outcome{true, detail.str()};
}

// ---------------------------------------------------------------- criterion 4
Outcome plaquette_consistency() {
    const auto model = make_bloch_full();
    const CMatrix expected = Complex(0, -1) * pauli_z();
    double worst_f = 0.0;
    std::vector<double> residuals;
    for (double d : {1e-2, 5e-3, 2.5e-3}) {
        const PlaquetteReport r = plaquette_check(*model, vec3(0, 0, 0), 0, 1, d, 512);
        worst_f = std::max(worst_f, (r.f_ij - expected).norm());
        residuals.push_back(r.residual);
    }
    const double ratio1 = residuals[0] / residuals[1];
    const double ratio2 = residuals[1] / residuals[2];
    std::ostringstream detail;
    detail << "decay ratios " << ratio1 << ", " << ratio2 << "; F_12(0) defect "
           << worst_f;
    return Outcome{ratio1 >= 6.0 && ratio2 >= 6.0 && worst_f <= 1e-4, detail.str()};
}

// ---------------------------------------------------------------- criterion 5
Outcome fiber_identity() {
    struct Case {
        std::unique_ptr<ParametricModel> model;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    cases.push_back({make_bloch_full(), 51});
    cases.push_back({make_bloch_equator2(), 52});
    cases.push_back({make_classical_simplex(2), 53});
    cases.push_back({make_classical_simplex(3), 54});
    cases.push_back({make_parallel_exp_default(), 55});
    cases.push_back({make_parallel_exp_two_qubit(), 56});

    double worst_defect = 0.0;
    double worst_excess = std::numeric_limits<double>::infinity();
    for (const auto& c : cases) {
        std::mt19937_64 eng(c.seed);
        for (int rep = 0; rep < 5; ++rep) {
            const RVector theta = interior_point(*c.model, eng, 0.6);
            RVector dir(c.model->param_dim());
            for (int i = 0; i < dir.size(); ++i) dir(i) = rng::gaussian(eng);
            if (dir.norm() == 0.0) dir(0) = 1.0;
            const FiberMinReport r =
                fiber_min_check(*c.model, theta, dir, 100, c.seed + rep);
            worst_defect = std::max(worst_defect, r.identity_defect);
            worst_excess = std::min(worst_excess, r.min_excess);
        }
    }
    std::ostringstream detail;
    detail << "worst |4TrWW - dJd| = " << worst_defect << ", min vertical excess "
           << worst_excess;
    return Outcome{worst_defect <= 1e-8 && worst_excess >= -1e-10, detail.str()};
}

// ---------------------------------------------------------------- criterion 6
Outcome theorem1_attainment() {
    struct Case {
        std::unique_ptr<ParametricModel> model;
        RVector theta;
    };
    std::vector<Case> cases;
    cases.push_back({make_classical_simplex(2), RVector::Constant(1, 0.3)});
    cases.push_back({make_classical_simplex(3), RVector::Constant(2, 0.25)});
    cases.push_back({make_parallel_exp_default(), RVector::Constant(1, 0.4)});
    cases.push_back({make_parallel_exp_two_qubit(), RVector::Constant(2, -0.35)});

    double worst_cov = 0.0, worst_mean = 0.0, worst_jac = 0.0;
    for (const auto& c : cases) {
        const Estimator est = optimal_estimator(*c.model, c.theta);
        const CovarianceReport cov = exact_covariance(est, *c.model, c.theta);
        worst_cov =
            std::max(worst_cov, (cov.cov - cov.cr_bound).cwiseAbs().maxCoeff());
        const UnbiasednessReport ub = check_locally_unbiased(est, *c.model, c.theta, 1e-5);
        worst_mean = std::max(worst_mean, ub.mean_defect);
        worst_jac = std::max(worst_jac, ub.jacobian_defect);
    }
    std::ostringstream detail;
    detail << "worst |cov - (J)^-1| = " << worst_cov << ", unbiasedness defects "
           << worst_mean << " / " << worst_jac;
    return Outcome{worst_cov <= 1e-8 && worst_mean <= 1e-6 && worst_jac <= 1e-6,
                   detail.str()};
}

// ---------------------------------------------------------------- criterion 7
Outcome covariance_bound() {
    struct Case {
        std::unique_ptr<ParametricModel> model;
        RVector theta;
    };
    std::vector<Case> cases;
    cases.push_back({make_bloch_full(), vec3(0.2, -0.1, 0.3)});
    cases.push_back({make_bloch_equator2(), RVector::Constant(2, 0.2)});
    cases.push_back({make_classical_simplex(2), RVector::Constant(1, 0.3)});
    cases.push_back({make_parallel_exp_two_qubit(), RVector::Constant(2, 0.3)});

    double worst_gap = std::numeric_limits<double>::infinity();
    for (const auto& c : cases) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Estimator est = random_unbiased_estimator(*c.model, c.theta, seed);
            const CovarianceReport cov = exact_covariance(est, *c.model, c.theta);
            worst_gap = std::min(worst_gap, cov.gap_min_eig);
        }
    }
    std::ostringstream detail;
    detail << "min eigenvalue of cov - (J)^-1 over 200 estimators: " << worst_gap;
    return Outcome{worst_gap >= -1e-6, detail.str()};
}

// ---------------------------------------------------------------- criterion 8
Outcome holonomy_classes() {
    TransportOptions opts;
    opts.steps = 512;

    const auto loop_distance = [&](const ParametricModel& model,
                                   const std::vector<RVector>& waypoints) {
        const CurvePath loop(model, waypoints);
        const Amplitude w0 = positive_amplitude(model.evaluate(waypoints.front()));
        return relative_phase_factor(loop, w0, opts).rpf_distance_to_identity;
    };

    const auto random_loops = [&](const ParametricModel& model, std::uint64_t seed,
                                  int count) {
        std::mt19937_64 eng(seed);
        double worst = 0.0;
        for (int rep = 0; rep < count; ++rep) {
            std::vector<RVector> wp;
            const int corners = model.param_dim() == 1 ? 2 : 4;
            for (int k = 0; k < corners; ++k) {
                wp.push_back(interior_point(model, eng, 0.7));
            }
            wp.push_back(wp.front());
            worst = std::max(worst, loop_distance(model, wp));
        }
        return worst;
    };

    double worst_flat = 0.0;
    worst_flat = std::max(worst_flat, random_loops(*make_classical_simplex(2), 81, 10));
    worst_flat = std::max(worst_flat, random_loops(*make_classical_simplex(3), 82, 10));
    worst_flat = std::max(worst_flat, random_loops(*make_parallel_exp_default(), 83, 10));
    worst_flat = std::max(worst_flat, random_loops(*make_parallel_exp_two_qubit(), 84, 10));

    const auto bloch = make_bloch_full();
    const double bloch_distance =
        loop_distance(*bloch, {vec3(0.5, 0, 0), vec3(0, 0.5, 0), vec3(-0.5, 0, 0),
                               vec3(0, -0.5, 0), vec3(0.5, 0, 0)});

    std::ostringstream detail;
    detail << "worst flat-family ||RPF - I|| = " << worst_flat
           << " over 40 loops; bloch loop " << bloch_distance;
    return Outcome{worst_flat <= 1e-5 && bloch_distance >= 0.01, detail.str()};
}

// ---------------------------------------------------------------- criterion 9
Outcome monte_carlo_workflow() {
    RunConfig config;
    config.model_source = "zoo:classical_simplex";
    config.levels = 2;
    config.theta = RVector::Constant(1, 0.3);
    config.samples = 100000;
    config.seed = 7;

    const auto model = make_model(config);
    const Estimator est = optimal_estimator(*model, config.theta);
    const CovarianceReport exact = exact_covariance(est, *model, config.theta);
    const CovarianceReport mc =
        monte_carlo_covariance(est, *model, config.theta, config.samples, config.seed);

    double worst_sigma = 0.0;
    for (int i = 0; i < mc.cov.rows(); ++i) {
        for (int j = 0; j < mc.cov.cols(); ++j) {
            const double se = (*mc.std_errors)(i, j);
            const double diff = std::abs(mc.cov(i, j) - exact.cov(i, j));
            worst_sigma = std::max(worst_sigma, se > 0 ? diff / se : diff);
        }
    }

    config.workers = 1;
    const std::string report1 = dump_json(estimate_report(*model, config).report);
    config.workers = 8;
    const std::string report8 = dump_json(estimate_report(*model, config).report);

    std::ostringstream detail;
    detail << "MC vs exact covariance at " << worst_sigma
           << " std errors; 1-vs-8-worker reports "
           << (report1 == report8 ? "byte-identical" : "DIFFER");
    return Outcome{worst_sigma <= 5.0 && report1 == report8, detail.str()};
}

}  // namespace

int main() {
    const auto suite_start = Clock::now();

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"SLD correctness (1000 random solves, n in {2,3,4})", sld_correctness},
        {"Fisher sanity (bloch identity, Bernoulli family)", fisher_sanity},
        {"curvature-commutator equivalence (4 models x 20 points)",
         theorem2_equivalence},
        {"plaquette expansion (third-order decay, F_12 at center)",
         plaquette_consistency},
        {"fiber minimization identity (horizontal = quadratic form)", fiber_identity},
        {"bound attainment (cov = (J)^-1 for commuting families)",
         theorem1_attainment},
        {"covariance bound (50 random unbiased estimators per model)",
         covariance_bound},
        {"loop holonomy (flat families vanish, bloch does not)", holonomy_classes},
        {"Monte Carlo workflow (5 sigma match, worker invariance)",
         monte_carlo_workflow},
    };

    int failures = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Outcome outcome{false, ""};
        try {
            outcome = criteria[k].run();
        } catch (const std::exception& e) {
            outcome = Outcome{false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %2zu. %s -- %s\n", outcome.pass ? "PASS" : "FAIL", k + 1,
                    criteria[k].name, outcome.detail.c_str());
        if (!outcome.pass) ++failures;
    }

    const double seconds =
        std::chrono::duration<double>(Clock::now() - suite_start).count();
    const bool on_time = seconds < 120.0;
    std::printf("[%s] 10. wall clock -- %.2f s (budget 120 s)\n",
                on_time ? "PASS" : "FAIL", seconds);
    if (!on_time) ++failures;

    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
