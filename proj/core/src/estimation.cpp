#include "uhlmann/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "uhlmann/rng.hpp"

namespace uhlmann {

Povm::Povm(std::vector<std::string> labels, std::vector<HermitianMatrix> elements,
           double psd_tol, double completeness_tol)
    : labels_(std::move(labels)), elements_(std::move(elements)) {
    if (elements_.empty() || labels_.size() != elements_.size()) {
        throw InputError("Povm: need one label per element, at least one outcome");
    }
    const Eigen::Index n = elements_.front().dim();
    CMatrix sum = CMatrix::Zero(n, n);
    for (size_t k = 0; k < elements_.size(); ++k) {
        if (elements_[k].dim() != n) {
            throw InputError("Povm: element dimension mismatch");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(elements_[k].mat(), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -psd_tol) {
            std::ostringstream msg;
            msg << "Povm: element '" << labels_[k] << "' has eigenvalue "
                << es.eigenvalues().minCoeff() << " below -" << psd_tol;
            throw InputError(msg.str());
        }
        sum += elements_[k].mat();
    }
    const double defect = (sum - identity(n)).norm();
    if (defect > completeness_tol) {
        std::ostringstream msg;
        msg << "Povm: completeness defect ||sum M - I||_F = " << defect << " exceeds "
            << completeness_tol;
        throw InputError(msg.str());
    }
}

Povm Povm::projective(const CMatrix& basis) {
    std::vector<std::string> labels;
    std::vector<HermitianMatrix> elements;
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        labels.push_back(std::to_string(k + 1));
        elements.emplace_back(basis.col(k) * basis.col(k).adjoint());
    }
    return Povm(std::move(labels), std::move(elements));
}

RVector outcome_probabilities(const Povm& povm, const DensityMatrix& rho) {
    if (povm.dim() != rho.dim()) {
        throw InputError("outcome_probabilities: dimension mismatch");
    }
    RVector p(povm.size());
    for (int k = 0; k < povm.size(); ++k) {
        const double raw = (rho.mat() * povm.elements()[static_cast<size_t>(k)].mat())
                               .trace()
                               .real();
        if (raw < -1e-9 || raw > 1.0 + 1e-9) {
            std::ostringstream msg;
            msg << "outcome_probabilities: p(" << k << ") = " << raw
                << " too far outside [0,1]";
            throw InputError(msg.str());
        }
        p(k) = std::min(std::max(raw, 0.0), 1.0);
    }
    if (std::abs(p.sum() - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "outcome_probabilities: probabilities sum to " << p.sum();
        throw InputError(msg.str());
    }
    return p;
}

namespace {

using IndexRange = std::pair<int, int>;  // [begin, end)

std::vector<IndexRange> split_by_gaps(const RVector& values, int offset, double gap_tol) {
    std::vector<IndexRange> out;
    int begin = 0;
    for (int k = 1; k <= values.size(); ++k) {
        if (k == values.size() || values(k) - values(k - 1) > gap_tol) {
            out.emplace_back(offset + begin, offset + k);
            begin = k;
        }
    }
    return out;
}

}  // namespace

SimDiagResult simultaneous_diagonalize(const std::vector<HermitianMatrix>& matrices,
                                       double tol) {
    if (matrices.empty()) {
        throw InputError("simultaneous_diagonalize: at least one matrix required");
    }
    const Eigen::Index n = matrices.front().dim();
    const int m = static_cast<int>(matrices.size());

    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int i = 0; i < m; ++i) {
        if (matrices[static_cast<size_t>(i)].dim() != n) {
            throw InputError("simultaneous_diagonalize: dimension mismatch");
        }
        for (int j = i + 1; j < m; ++j) {
            const double c = comm_norm(matrices[static_cast<size_t>(i)].mat(),
                                       matrices[static_cast<size_t>(j)].mat());
            if (c > worst) {
                worst = c;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > tol) {
        std::ostringstream msg;
        msg << "simultaneous_diagonalize: matrices " << wi << " and " << wj
            << " do not commute (comm_norm = " << worst << " > " << tol
            << "); the model is not locally quasi-classical here";
        throw TheoremViolationError(msg.str());
    }

    // Random real combination with a fixed seed keeps the basis
    // deterministic across runs.
    std::mt19937_64 eng(0x51D5EEDULL);
    CMatrix combo = CMatrix::Zero(n, n);
    for (const auto& l : matrices) {
        combo += rng::gaussian(eng) * l.mat();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(combo);
    CMatrix v = es.eigenvectors();

    const double combo_scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<IndexRange> clusters = split_by_gaps(es.eigenvalues(), 0, 1e-6 * combo_scale);

    // Degenerate clusters of the combination are re-diagonalized per matrix.
    for (const auto& l : matrices) {
        std::vector<IndexRange> refined;
        const double scale = std::max(1.0, l.mat().norm());
        for (const auto& [b, e] : clusters) {
            const int width = e - b;
            if (width == 1) {
                refined.emplace_back(b, e);
                continue;
            }
            const CMatrix vc = v.middleCols(b, width);
            const CMatrix block = vc.adjoint() * l.mat() * vc;
            Eigen::SelfAdjointEigenSolver<CMatrix> bes(0.5 * (block + block.adjoint()));
            v.middleCols(b, width) = vc * bes.eigenvectors();
            for (const auto& sub : split_by_gaps(bes.eigenvalues(), b, 1e-6 * scale)) {
                refined.push_back(sub);
            }
        }
        clusters = std::move(refined);
    }

    SimDiagResult out;
    out.basis = v;
    out.eigenvalues.resize(m, n);
    out.max_offdiag = 0.0;
    for (int k = 0; k < m; ++k) {
        const CMatrix t = v.adjoint() * matrices[static_cast<size_t>(k)].mat() * v;
        out.eigenvalues.row(k) = t.diagonal().real();
        const CMatrix off = t - CMatrix(t.diagonal().asDiagonal());
        out.max_offdiag =
            std::max(out.max_offdiag,
                     off.norm() / std::max(1.0, matrices[static_cast<size_t>(k)].mat().norm()));
    }
    if (out.max_offdiag > 100.0 * tol) {
        std::ostringstream msg;
        msg << "simultaneous_diagonalize: off-diagonal residual " << out.max_offdiag
            << " exceeds 100 x tol";
        throw ConvergenceError(msg.str());
    }
    return out;
}

namespace {

RMatrix invert_spd(const RMatrix& a, const char* what) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(a);
    const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, lmax)) {
        std::ostringstream msg;
        msg << what << ": matrix is singular (min eigenvalue "
            << es.eigenvalues().minCoeff() << ")";
        throw DomainError(msg.str());
    }
    return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
}

}  // namespace

Estimator optimal_estimator(const ParametricModel& model, const RVector& theta,
                            const Tolerances& tol) {
    const SldSet s = sld_set(model, theta, tol);
    std::vector<HermitianMatrix> slds = s.slds;
    const SimDiagResult diag = simultaneous_diagonalize(slds, tol.commutator);
    const RMatrix inv = invert_spd(s.fisher, "optimal_estimator: Fisher information");

    const int m = model.param_dim();
    const Eigen::Index n = diag.basis.cols();
    std::vector<RVector> estimates;
    estimates.reserve(static_cast<size_t>(n));
    for (Eigen::Index xi = 0; xi < n; ++xi) {
        RVector est(m);
        for (int j = 0; j < m; ++j) {
            double acc = theta(j);
            for (int k = 0; k < m; ++k) {
                acc += inv(j, k) * diag.eigenvalues(k, xi);
            }
            est(j) = acc;
        }
        estimates.push_back(std::move(est));
    }
    return Estimator{Povm::projective(diag.basis), std::move(estimates)};
}

namespace {

RVector expectation(const Estimator& est, const ParametricModel& model,
                    const RVector& theta) {
    const RVector p = outcome_probabilities(est.povm, model.evaluate(theta));
    RVector e = RVector::Zero(model.param_dim());
    for (int k = 0; k < est.povm.size(); ++k) {
        e += p(k) * est.estimates[static_cast<size_t>(k)];
    }
    return e;
}

}  // namespace

UnbiasednessReport check_locally_unbiased(const Estimator& est, const ParametricModel& model,
                                          const RVector& theta, double h) {
    const int m = model.param_dim();
    UnbiasednessReport r{0.0, 0.0, h};
    r.mean_defect = (expectation(est, model, theta) - theta).cwiseAbs().maxCoeff();

    for (int i = 0; i < m; ++i) {
        RVector plus = theta, minus = theta;
        plus(i) += h;
        minus(i) -= h;
        if (model.domain().violation(plus) || model.domain().violation(minus)) {
            std::ostringstream msg;
            msg << "check_locally_unbiased: stencil for coordinate " << i
                << " leaves the domain at h = " << h;
            throw DomainError(msg.str());
        }
        const RVector row =
            (expectation(est, model, plus) - expectation(est, model, minus)) / (2.0 * h);
        for (int j = 0; j < m; ++j) {
            const double target = i == j ? 1.0 : 0.0;
            r.jacobian_defect = std::max(r.jacobian_defect, std::abs(row(j) - target));
        }
    }
    return r;
}

CovarianceReport exact_covariance(const Estimator& est, const ParametricModel& model,
                                  const RVector& theta) {
    const int m = model.param_dim();
    const RVector p = outcome_probabilities(est.povm, model.evaluate(theta));

    CovarianceReport r;
    r.samples = -1;
    r.mean = RVector::Zero(m);
    for (int k = 0; k < est.povm.size(); ++k) {
        r.mean += p(k) * est.estimates[static_cast<size_t>(k)];
    }
    r.cov = RMatrix::Zero(m, m);
    for (int k = 0; k < est.povm.size(); ++k) {
        const RVector d = est.estimates[static_cast<size_t>(k)] - r.mean;
        r.cov += p(k) * (d * d.transpose());
    }
    r.cov = 0.5 * (r.cov + r.cov.transpose().eval());

    const SldSet s = sld_set(model, theta);
    r.cr_bound = invert_spd(s.fisher, "exact_covariance: Fisher information");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(r.cov - r.cr_bound);
    r.gap_min_eig = es.eigenvalues().minCoeff();
    return r;
}

int resolve_worker_count(int requested) {
    int workers = requested;
    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = static_cast<int>(std::min(hw == 0 ? 1u : hw, 4u));
    }
    if (const char* env = std::getenv("UHLMANN_KIT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) workers = std::min(workers, cap);
    }
    return std::max(1, workers);
}

namespace {

constexpr long long kSampleChunk = 65536;

std::vector<long long> sample_chunk(const RVector& cdf, long long count,
                                    std::uint64_t chunk_seed) {
    std::vector<long long> counts(static_cast<size_t>(cdf.size()), 0);
    std::mt19937_64 eng(chunk_seed);
    for (long long s = 0; s < count; ++s) {
        const double u = rng::canonical(eng);
        int k = 0;
        while (k + 1 < cdf.size() && u >= cdf(k)) ++k;
        ++counts[static_cast<size_t>(k)];
    }
    return counts;
}

}  // namespace

std::vector<long long> sample_outcomes(const Povm& povm, const DensityMatrix& rho,
                                       long long n_samples, std::uint64_t seed,
                                       int workers) {
    if (n_samples < 1) {
        throw InputError("sample_outcomes: n_samples must be >= 1");
    }
    RVector p = outcome_probabilities(povm, rho);
    p /= p.sum();  // exact unit mass for the sampler
    RVector cdf(p.size());
    double acc = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        acc += p(k);
        cdf(k) = acc;
    }

    const long long n_chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
    std::vector<std::vector<long long>> per_chunk(static_cast<size_t>(n_chunks));

    const int n_workers = std::min<long long>(resolve_worker_count(workers), n_chunks);
    auto run = [&](int worker) {
        for (long long c = worker; c < n_chunks; c += n_workers) {
            const long long count =
                std::min(kSampleChunk, n_samples - c * kSampleChunk);
            per_chunk[static_cast<size_t>(c)] =
                sample_chunk(cdf, count, rng::derive_seed(seed, static_cast<std::uint64_t>(c)));
        }
    };
    if (n_workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(run, t);
        for (auto& t : pool) t.join();
    }

    std::vector<long long> counts(static_cast<size_t>(povm.size()), 0);
    for (const auto& chunk : per_chunk) {
        for (size_t k = 0; k < counts.size(); ++k) counts[k] += chunk[k];
    }
    return counts;
}

CovarianceReport monte_carlo_covariance(const Estimator& est, const ParametricModel& model,
                                        const RVector& theta, long long n_samples,
                                        std::uint64_t seed, int workers) {
    if (n_samples < 2) {
        throw InputError("monte_carlo_covariance: n_samples must be >= 2");
    }
    const int m = model.param_dim();
    const std::vector<long long> counts =
        sample_outcomes(est.povm, model.evaluate(theta), n_samples, seed, workers);
    const double n = static_cast<double>(n_samples);

    CovarianceReport r;
    r.samples = n_samples;
    r.mean = RVector::Zero(m);
    for (int k = 0; k < est.povm.size(); ++k) {
        r.mean += (counts[static_cast<size_t>(k)] / n) * est.estimates[static_cast<size_t>(k)];
    }
    RMatrix second = RMatrix::Zero(m, m);
    RMatrix fourth = RMatrix::Zero(m, m);  // E[(x_i-mean_i)^2 (x_j-mean_j)^2]
    for (int k = 0; k < est.povm.size(); ++k) {
        const double w = counts[static_cast<size_t>(k)] / n;
        const RVector d = est.estimates[static_cast<size_t>(k)] - r.mean;
        second += w * (d * d.transpose());
        const RVector d2 = d.cwiseProduct(d);
        fourth += w * (d2 * d2.transpose());
    }
    r.cov = second * (n / (n - 1.0));

    RMatrix se(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double var = fourth(i, j) - second(i, j) * second(i, j);
            se(i, j) = std::sqrt(std::max(var, 0.0) / n);
        }
    }
    r.std_errors = se;

    const SldSet s = sld_set(model, theta);
    r.cr_bound = invert_spd(s.fisher, "monte_carlo_covariance: Fisher information");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(r.cov - r.cr_bound);
    r.gap_min_eig = es.eigenvalues().minCoeff();
    return r;
}

namespace {

RVector mean_estimate(const Estimator& est, const std::vector<long long>& counts,
                      long long n, int m) {
    RVector mean = RVector::Zero(m);
    for (int k = 0; k < est.povm.size(); ++k) {
        mean += (static_cast<double>(counts[static_cast<size_t>(k)]) / n) *
                est.estimates[static_cast<size_t>(k)];
    }
    return mean;
}

}  // namespace

AdaptiveTrace two_stage_adaptive(const ParametricModel& model, const RVector& theta_true,
                                 const RVector& theta_init, long long n1, long long n2,
                                 std::uint64_t seed, const Tolerances& tol) {
    if (n1 < 1) {
        throw InputError("two_stage_adaptive: n1 must be >= 1");
    }
    require_in_domain(model, theta_init);
    const DensityMatrix rho_true = model.evaluate(theta_true);
    const int m = model.param_dim();

    const Estimator stage1 = optimal_estimator(model, theta_init, tol);
    const std::vector<long long> counts1 =
        sample_outcomes(stage1.povm, rho_true, n1, rng::derive_seed(seed, 101));

    AdaptiveTrace trace;
    trace.stage1_estimate = mean_estimate(stage1, counts1, n1, m);
    trace.stage1_used = trace.stage1_estimate;
    if (model.domain().violation(trace.stage1_used)) {
        trace.stage1_used = model.domain().clamp_interior(trace.stage1_used, 1e-3);
        trace.clamped = true;
    }
    trace.final_estimate = trace.stage1_estimate;

    if (n2 > 0) {
        Estimator stage2 = optimal_estimator(model, trace.stage1_used, tol);
        const std::vector<long long> counts2 =
            sample_outcomes(stage2.povm, rho_true, n2, rng::derive_seed(seed, 102));
        trace.stage2_estimate = mean_estimate(stage2, counts2, n2, m);
        trace.final_estimate = *trace.stage2_estimate;
        trace.stage2_estimator = std::move(stage2);
    }
    return trace;
}

Estimator random_unbiased_estimator(const ParametricModel& model, const RVector& theta,
                                    std::uint64_t seed, int outcomes) {
    const int m = model.param_dim();
    const Eigen::Index n = model.evaluate(theta).dim();
    const int k_out =
        outcomes > 0 ? outcomes : static_cast<int>(std::max<Eigen::Index>(n, m + 1)) + 1;
    if (k_out < m + 1) {
        throw InputError("random_unbiased_estimator: need at least m+1 outcomes");
    }

    const DensityMatrix rho = model.evaluate(theta);
    std::vector<HermitianMatrix> drho;
    for (int i = 0; i < m; ++i) drho.push_back(derivative(model, theta, i));

    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 eng(rng::derive_seed(seed, 7000 + static_cast<std::uint64_t>(attempt)));

        // Random rank-1 POVM: normalize random projectors by S^{-1/2}.
        std::vector<CMatrix> raw;
        CMatrix s_sum = CMatrix::Zero(n, n);
        for (int k = 0; k < k_out; ++k) {
            Eigen::VectorXcd vec(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                vec(i) = Complex(rng::gaussian(eng), rng::gaussian(eng));
            }
            raw.push_back(vec * vec.adjoint());
            s_sum += raw.back();
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(s_sum);
        if (es.eigenvalues().minCoeff() < 1e-8) continue;
        const CMatrix s_inv_root = es.eigenvectors() *
                                   es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().adjoint();

        std::vector<std::string> labels;
        std::vector<HermitianMatrix> elements;
        for (int k = 0; k < k_out; ++k) {
            labels.push_back(std::to_string(k + 1));
            CMatrix e = s_inv_root * raw[static_cast<size_t>(k)] * s_inv_root;
            elements.emplace_back(0.5 * (e + e.adjoint().eval()));
        }
        Povm povm(std::move(labels), std::move(elements));

        // Unbiasedness is linear in the estimates: one shared constraint
        // matrix, one right-hand side per parameter.
        RMatrix a(m + 1, k_out);
        const RVector p = outcome_probabilities(povm, rho);
        a.row(0) = p.transpose();
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < k_out; ++k) {
                a(i + 1, k) =
                    (drho[static_cast<size_t>(i)].mat() * povm.elements()[static_cast<size_t>(k)].mat())
                        .trace()
                        .real();
            }
        }
        Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(a);
        if (cod.rank() < m + 1) continue;

        RMatrix x(k_out, m);
        double residual = 0.0;
        for (int j = 0; j < m; ++j) {
            RVector b = RVector::Zero(m + 1);
            b(0) = theta(j);
            b(j + 1) = 1.0;
            const RVector sol = cod.solve(b);
            residual = std::max(residual, (a * sol - b).norm());
            x.col(j) = sol;
        }
        if (residual > 1e-9) continue;

        std::vector<RVector> estimates;
        for (int k = 0; k < k_out; ++k) estimates.push_back(x.row(k).transpose());
        return Estimator{std::move(povm), std::move(estimates)};
    }
    throw ConvergenceError(
        "random_unbiased_estimator: could not satisfy the unbiasedness constraints");
}

std::string counts_csv(const Povm& povm, const std::vector<long long>& counts) {
    std::ostringstream out;
    out << "outcome,count\n";
    for (size_t k = 0; k < counts.size(); ++k) {
        out << povm.labels()[k] << "," << counts[k] << "\n";
    }
    return out.str();
}

}  // namespace uhlmann
