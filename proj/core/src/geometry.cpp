#include "uhlmann/geometry.hpp"

#include <sstream>

namespace uhlmann {

SldSet sld_set(const ParametricModel& model, const RVector& theta, const Tolerances& tol) {
    require_in_domain(model, theta);
    const int m = model.param_dim();
    const DensityMatrix rho = model.evaluate(theta);

    SldSet out;
    out.theta = theta;
    out.slds.reserve(m);
    for (int i = 0; i < m; ++i) {
        out.slds.push_back(solve_sld(rho, derivative(model, theta, i), tol));
    }
    out.fisher.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double v =
                (rho.mat() * out.slds[i].mat() * out.slds[j].mat()).trace().real();
            out.fisher(i, j) = v;
            out.fisher(j, i) = v;
        }
    }
    return out;
}

CurvatureTensor::CurvatureTensor(RVector theta, int m, Eigen::Index n)
    : theta_(std::move(theta)), m_(m), f_(static_cast<size_t>(m) * m, CMatrix::Zero(n, n)) {}

const CMatrix& CurvatureTensor::at(int i, int j) const {
    return f_[static_cast<size_t>(i) * m_ + j];
}

void CurvatureTensor::set_pair(int i, int j, const CMatrix& f_ij) {
    f_[static_cast<size_t>(i) * m_ + j] = f_ij;
    f_[static_cast<size_t>(j) * m_ + i] = -f_ij;
}

double CurvatureTensor::max_norm() const {
    double worst = 0.0;
    for (const auto& f : f_) worst = std::max(worst, f.norm());
    return worst;
}

CurvatureTensor curvature(const ParametricModel& model, const RVector& theta,
                          const Tolerances& tol) {
    require_in_domain(model, theta);
    const int m = model.param_dim();
    const SldSet at_theta = sld_set(model, theta, tol);

    // d_i L_j for all j at once per displaced point.
    std::vector<std::vector<CMatrix>> dl(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double h = model.fd_step(theta, i);
        RVector plus = theta, minus = theta;
        plus(i) += h;
        minus(i) -= h;
        if (model.domain().violation(plus) || model.domain().violation(minus)) {
            std::ostringstream msg;
            msg << "curvature: SLD difference stencil for coordinate " << i
                << " leaves the domain at step h = " << h;
            throw DomainError(msg.str());
        }
        const SldSet sp = sld_set(model, plus, tol);
        const SldSet sm = sld_set(model, minus, tol);
        dl[static_cast<size_t>(i)].reserve(m);
        for (int j = 0; j < m; ++j) {
            dl[static_cast<size_t>(i)].push_back(
                (sp.slds[static_cast<size_t>(j)].mat() -
                 sm.slds[static_cast<size_t>(j)].mat()) /
                (2.0 * h));
        }
    }

    CurvatureTensor out(theta, m, model.evaluate(theta).dim());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const CMatrix f = (dl[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                               dl[static_cast<size_t>(j)][static_cast<size_t>(i)]) -
                              0.5 * commutator(at_theta.slds[static_cast<size_t>(i)].mat(),
                                               at_theta.slds[static_cast<size_t>(j)].mat());
            out.set_pair(i, j, f);
        }
    }
    return out;
}

namespace {

LocalClassification worst_pair(const SldSet& s, double tol) {
    LocalClassification out{true, 0.0, -1, -1};
    const int m = static_cast<int>(s.slds.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double c = comm_norm(s.slds[static_cast<size_t>(i)].mat(),
                                       s.slds[static_cast<size_t>(j)].mat());
            if (c > out.worst_comm_norm) {
                out.worst_comm_norm = c;
                out.worst_i = i;
                out.worst_j = j;
            }
        }
    }
    out.commuting = out.worst_comm_norm <= tol;
    return out;
}

}  // namespace

LocalClassification classify_local(const ParametricModel& model, const RVector& theta,
                                   double tol) {
    return worst_pair(sld_set(model, theta), tol);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::not_locally_quasi_classical: return "not_locally_quasi_classical";
        case Verdict::locally_quasi_classical: return "locally_quasi_classical";
        case Verdict::quasi_classical: return "quasi_classical";
    }
    return "unknown";
}

Classification classify_global(const ParametricModel& model,
                               const std::vector<RVector>& grid, double tol) {
    if (grid.empty()) {
        throw InputError("classify_global: empty grid");
    }
    const int m = model.param_dim();

    std::vector<SldSet> sets;
    sets.reserve(grid.size());
    for (const auto& theta : grid) sets.push_back(sld_set(model, theta));

    Classification out;
    out.grid = grid;
    out.tol = tol;

    bool local_ok = true;
    for (size_t p = 0; p < sets.size(); ++p) {
        const LocalClassification lc = worst_pair(sets[p], tol);
        if (lc.worst_comm_norm > out.worst_commutator.value) {
            out.worst_commutator =
                CommutatorWitness{lc.worst_comm_norm, grid[p], grid[p], lc.worst_i, lc.worst_j};
        }
        local_ok = local_ok && lc.commuting;
    }

    bool cross_ok = true;
    for (size_t p = 0; p < sets.size(); ++p) {
        for (size_t q = p + 1; q < sets.size(); ++q) {
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    const double c = comm_norm(sets[p].slds[static_cast<size_t>(i)].mat(),
                                               sets[q].slds[static_cast<size_t>(j)].mat());
                    cross_ok = cross_ok && c <= tol;
                    if (c > out.worst_commutator.value) {
                        out.worst_commutator = CommutatorWitness{c, grid[p], grid[q], i, j};
                    }
                }
            }
        }
    }

    for (const auto& theta : grid) {
        try {
            const CurvatureTensor f = curvature(model, theta);
            double worst = 0.0;
            int wi = -1, wj = -1;
            for (int i = 0; i < m; ++i) {
                for (int j = i + 1; j < m; ++j) {
                    const double v = f.at(i, j).norm();
                    if (v > worst) {
                        worst = v;
                        wi = i;
                        wj = j;
                    }
                }
            }
            if (worst >= out.worst_curvature.value) {
                out.worst_curvature = CurvatureWitness{worst, theta, wi, wj};
            }
        } catch (const DomainError&) {
            ++out.curvature_points_skipped;
        }
    }

    if (!local_ok) {
        out.verdict = Verdict::not_locally_quasi_classical;
    } else if (!cross_ok) {
        out.verdict = Verdict::locally_quasi_classical;
    } else {
        out.verdict = Verdict::quasi_classical;
    }
    return out;
}

Theorem2Report theorem2_check(const ParametricModel& model, const RVector& theta,
                              const Tolerances& tol) {
    Theorem2Report r;
    r.theta = theta;
    r.commutator_tol = tol.commutator;
    r.curvature_tol = tol.curvature;
    r.max_curvature_norm = curvature(model, theta, tol).max_norm();
    r.worst_comm_norm = classify_local(model, theta, tol.commutator).worst_comm_norm;
    r.curvature_vanishes = r.max_curvature_norm <= tol.curvature;
    r.commutators_vanish = r.worst_comm_norm <= tol.commutator;
    const bool one_sided =
        (r.commutators_vanish && r.max_curvature_norm >= 100.0 * tol.curvature) ||
        (r.curvature_vanishes && r.worst_comm_norm >= 100.0 * tol.commutator);
    r.consistent = !one_sided;
    return r;
}

}  // namespace uhlmann
