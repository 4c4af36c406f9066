#include "uhlmann/reports.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "uhlmann/version.hpp"
#include "uhlmann/zoo.hpp"

namespace uhlmann {

namespace {

void dump_value(const json& j, std::string& out, int indent, int depth);

void append_double(double v, std::string& out) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
    // Keep a numeric token a float: %.17g renders whole doubles bare.
    if (out.find_first_of(".eE", out.size() - std::strlen(buf)) == std::string::npos) {
        out += ".0";
    }
}

void newline_indent(std::string& out, int indent, int depth) {
    out += '\n';
    out.append(static_cast<size_t>(indent * depth), ' ');
}

void dump_value(const json& j, std::string& out, int indent, int depth) {
    switch (j.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
            out += buf;
            break;
        }
        case json::value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
            out += buf;
            break;
        }
        case json::value_t::number_float:
            append_double(j.get<double>(), out);
            break;
        case json::value_t::string:
            out += json(j.get<std::string>()).dump();
            break;
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                newline_indent(out, indent, depth + 1);
                dump_value(item, out, indent, depth + 1);
            }
            newline_indent(out, indent, depth);
            out += ']';
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline_indent(out, indent, depth + 1);
                out += json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, indent, depth + 1);
            }
            newline_indent(out, indent, depth);
            out += '}';
            break;
        }
        default:
            out += "null";
            break;
    }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    out += '\n';
    return out;
}

namespace {

/// Delegating wrapper that pins the finite-difference step to a fixed h.
class StepOverrideModel : public ParametricModel {
  public:
    StepOverrideModel(std::unique_ptr<ParametricModel> inner, double h)
        : inner_(std::move(inner)), h_(h) {}

    std::string name() const override { return inner_->name(); }
    int state_dim() const override { return inner_->state_dim(); }
    const Domain& domain() const override { return inner_->domain(); }
    bool has_analytic_derivative() const override { return inner_->has_analytic_derivative(); }
    HermitianMatrix analytic_derivative(const RVector& theta, int i) const override {
        return inner_->analytic_derivative(theta, i);
    }
    double fd_step(const RVector&, int) const override { return h_; }

  protected:
    DensityMatrix evaluate_unchecked(const RVector& theta) const override {
        return inner_->evaluate(theta);
    }

  private:
    std::unique_ptr<ParametricModel> inner_;
    double h_;
};

}  // namespace

std::unique_ptr<ParametricModel> make_model(const RunConfig& config) {
    const std::string& src = config.model_source;
    std::unique_ptr<ParametricModel> model;
    if (src.rfind("file:", 0) == 0) {
        model = load_model(src.substr(5));
    } else {
        std::string name = src;
        if (src.rfind("zoo:", 0) == 0) name = src.substr(4);
        ZooParams params;
        params.levels = config.levels;
        model = zoo(name, params);
    }
    if (config.fd_h > 0.0) {
        model = std::make_unique<StepOverrideModel>(std::move(model), config.fd_h);
    }
    return model;
}

json config_json(const RunConfig& config) {
    json tol{{"hermiticity", config.tol.hermiticity},
             {"trace", config.tol.trace},
             {"positivity_floor", config.tol.positivity_floor},
             {"sld_residual", config.tol.sld_residual},
             {"commutator", config.tol.commutator},
             {"curvature", config.tol.curvature},
             {"lift_defect", config.tol.lift_defect},
             {"rpf_vanish", config.tol.rpf_vanish}};
    json path = json::array();
    for (const auto& w : config.path) path.push_back(rvector_to_json(w));
    return json{{"model_source", config.model_source},
                {"levels", config.levels},
                {"theta", config.theta.size() ? rvector_to_json(config.theta) : json(nullptr)},
                {"path", std::move(path)},
                {"grid_points", config.grid_points},
                {"tolerances", std::move(tol)},
                {"steps", config.steps},
                {"fd_h", config.fd_h > 0.0 ? json(config.fd_h) : json("model default")},
                {"seed", config.seed},
                {"samples", config.samples}};
}

namespace {

json report_shell(const char* kind, const RunConfig& config) {
    return json{{"report", kind},
                {"library", "uhlmann-kit"},
                {"version", std::string(kVersion)},
                {"config", config_json(config)}};
}

bool stencil_safe(const ParametricModel& model, const RVector& theta) {
    if (model.domain().violation(theta)) return false;
    for (int i = 0; i < model.param_dim(); ++i) {
        const double h = 2.5 * model.fd_step(theta, i);
        RVector plus = theta, minus = theta;
        plus(i) += h;
        minus(i) -= h;
        if (model.domain().violation(plus) || model.domain().violation(minus)) return false;
    }
    return true;
}

/// Interior lattice over the domain bounding box (15% margin per side),
/// snapped into the domain and filtered to stencil-safe points.
std::vector<RVector> build_grid(const ParametricModel& model, int per_axis) {
    const auto [lo, hi] = model.domain().bounding_box();
    const int m = model.param_dim();
    RVector a(m), b(m);
    for (int i = 0; i < m; ++i) {
        const double extent = hi(i) - lo(i);
        a(i) = lo(i) + 0.15 * extent;
        b(i) = hi(i) - 0.15 * extent;
    }

    std::vector<RVector> points;
    std::vector<int> idx(static_cast<size_t>(m), 0);
    while (true) {
        RVector p(m);
        for (int i = 0; i < m; ++i) {
            p(i) = per_axis == 1
                       ? 0.5 * (a(i) + b(i))
                       : a(i) + (b(i) - a(i)) * idx[static_cast<size_t>(i)] / (per_axis - 1);
        }
        // Out-of-domain corners (ball, simplex) are dropped, not clamped;
        // interior points only get snapped onto a lattice where one exists.
        if (!model.domain().violation(p)) {
            p = model.domain().clamp_interior(p, 1e-3);
        } else {
            p.resize(0);
        }
        if (p.size() == m && stencil_safe(model, p)) {
            bool dup = false;
            for (const auto& q : points) {
                if ((q - p).norm() < 1e-12) {
                    dup = true;
                    break;
                }
            }
            if (!dup) points.push_back(p);
        }
        int d = 0;
        while (d < m && ++idx[static_cast<size_t>(d)] == per_axis) {
            idx[static_cast<size_t>(d)] = 0;
            ++d;
        }
        if (d == m) break;
    }
    // The box center survives on every supported domain shape even when all
    // lattice corners fall outside (e.g. even counts on a ball).
    RVector center = model.domain().clamp_interior(0.5 * (a + b), 1e-3);
    if (!model.domain().violation(center) && stencil_safe(model, center)) {
        bool dup = false;
        for (const auto& q : points) {
            if ((q - center).norm() < 1e-12) dup = true;
        }
        if (!dup) points.push_back(center);
    }
    if (points.empty()) {
        throw DomainError("classify: no stencil-safe grid points inside the domain");
    }
    return points;
}

json classification_json(const Classification& c) {
    json grid = json::array();
    for (const auto& p : c.grid) grid.push_back(rvector_to_json(p));
    json worst_comm{{"value", c.worst_commutator.value},
                    {"i", c.worst_commutator.i},
                    {"j", c.worst_commutator.j}};
    if (c.worst_commutator.theta0.size()) {
        worst_comm["theta0"] = rvector_to_json(c.worst_commutator.theta0);
        worst_comm["theta1"] = rvector_to_json(c.worst_commutator.theta1);
    }
    json worst_curv{{"value", c.worst_curvature.value},
                    {"i", c.worst_curvature.i},
                    {"j", c.worst_curvature.j}};
    if (c.worst_curvature.theta.size()) {
        worst_curv["theta"] = rvector_to_json(c.worst_curvature.theta);
    }
    return json{{"verdict", to_string(c.verdict)},
                {"tol", c.tol},
                {"worst_commutator", std::move(worst_comm)},
                {"worst_curvature", std::move(worst_curv)},
                {"grid", std::move(grid)},
                {"curvature_points_skipped", c.curvature_points_skipped},
                {"note", "continuous-theta conditions are sampled on the disclosed grid only"}};
}

json theorem2_json(const Theorem2Report& r) {
    return json{{"theta", rvector_to_json(r.theta)},
                {"max_curvature_norm", r.max_curvature_norm},
                {"worst_comm_norm", r.worst_comm_norm},
                {"commutator_tol", r.commutator_tol},
                {"curvature_tol", r.curvature_tol},
                {"curvature_vanishes", r.curvature_vanishes},
                {"commutators_vanish", r.commutators_vanish},
                {"consistent", r.consistent}};
}

json transport_json(const TransportResult& t) {
    json out{{"steps", t.steps},
             {"defect", t.defect},
             {"w_end", cmatrix_to_json(t.w_end.mat())}};
    if (t.rpf) {
        out["rpf"] = cmatrix_to_json(*t.rpf);
        out["rpf_unitarity_defect"] = t.rpf_unitarity_defect;
        out["rpf_distance_to_identity"] = t.rpf_distance_to_identity;
        out["rpf_vanishes"] = t.rpf_vanishes;
    }
    return out;
}

json covariance_json(const CovarianceReport& r) {
    json out{{"mean", rvector_to_json(r.mean)},
             {"cov", rmatrix_to_json(r.cov)},
             {"cr_bound", rmatrix_to_json(r.cr_bound)},
             {"gap_min_eig", r.gap_min_eig},
             {"samples", r.samples < 0 ? json("exact") : json(r.samples)}};
    if (r.std_errors) {
        out["std_errors"] = rmatrix_to_json(*r.std_errors);
    }
    return out;
}

}  // namespace

json classify_report(const ParametricModel& model, const RunConfig& config) {
    json out = report_shell("classify", config);
    out["model"] = json{{"name", model.name()},
                        {"param_dim", model.param_dim()},
                        {"state_dim", model.state_dim()},
                        {"domain", model.domain().describe()}};

    const std::vector<RVector> grid = build_grid(model, config.grid_points);
    const Classification c = classify_global(model, grid, config.tol.commutator);
    out["classification"] = classification_json(c);

    json checks = json::array();
    bool all_consistent = true;
    for (const auto& p : grid) {
        const Theorem2Report r = theorem2_check(model, p, config.tol);
        all_consistent = all_consistent && r.consistent;
        checks.push_back(theorem2_json(r));
    }
    out["curvature_commutator_checks"] = std::move(checks);
    out["curvature_commutator_consistent"] = all_consistent;

    // Loop holonomy spot checks around the grid midpoint (axis pairs only;
    // a 1-parameter family has no nontrivial polygons).
    json loops = json::array();
    const int m = model.param_dim();
    if (m >= 2) {
        const auto [lo, hi] = model.domain().bounding_box();
        RVector mid(m), delta(m);
        for (int i = 0; i < m; ++i) {
            mid(i) = 0.5 * (lo(i) + hi(i));
            delta(i) = 0.12 * (hi(i) - lo(i));
        }
        mid = model.domain().clamp_interior(mid, 1e-3);
        int emitted = 0;
        for (int i = 0; i < m && emitted < 3; ++i) {
            for (int j = i + 1; j < m && emitted < 3; ++j) {
                RVector ei = RVector::Zero(m), ej = RVector::Zero(m);
                ei(i) = delta(i);
                ej(j) = delta(j);
                double shrink = 1.0;
                for (int attempt = 0; attempt < 4; ++attempt, shrink *= 0.5) {
                    const std::vector<RVector> wp = {mid, mid + shrink * ei,
                                                     mid + shrink * (ei + ej),
                                                     mid + shrink * ej, mid};
                    bool ok = true;
                    for (const auto& w : wp) {
                        ok = ok && !model.domain().violation(w);
                    }
                    if (!ok) continue;
                    TransportOptions opts;
                    opts.steps = config.steps;
                    opts.tol = config.tol;
                    const CurvePath loop(model, wp);
                    const TransportResult t =
                        relative_phase_factor(loop, positive_amplitude(model.evaluate(mid)), opts);
                    loops.push_back(json{{"axes", json::array({i, j})},
                                         {"base", rvector_to_json(mid)},
                                         {"extent", json::array({shrink * delta(i),
                                                                 shrink * delta(j)})},
                                         {"rpf_distance_to_identity",
                                          t.rpf_distance_to_identity},
                                         {"rpf_vanishes", t.rpf_vanishes}});
                    ++emitted;
                    break;
                }
            }
        }
    }
    out["loop_checks"] = std::move(loops);
    out["verdict"] = to_string(c.verdict);
    return out;
}

json fisher_report(const ParametricModel& model, const RunConfig& config) {
    if (config.theta.size() != model.param_dim()) {
        throw InputError("fisher: --theta with one value per model parameter is required");
    }
    json out = report_shell("fisher", config);
    const SldSet s = sld_set(model, config.theta, config.tol);
    out["theta"] = rvector_to_json(config.theta);
    out["fisher"] = rmatrix_to_json(s.fisher);
    json slds = json::array();
    for (const auto& l : s.slds) slds.push_back(cmatrix_to_json(l.mat()));
    out["slds"] = std::move(slds);

    const CurvatureTensor f = curvature(model, config.theta, config.tol);
    json fij = json::array();
    for (int i = 0; i < model.param_dim(); ++i) {
        for (int j = i + 1; j < model.param_dim(); ++j) {
            fij.push_back(json{{"i", i}, {"j", j}, {"matrix", cmatrix_to_json(f.at(i, j))}});
        }
    }
    out["curvature"] = std::move(fij);
    out["max_curvature_norm"] = f.max_norm();

    const LocalClassification lc = classify_local(model, config.theta, config.tol.commutator);
    out["locally_quasi_classical"] = lc.commuting;
    out["worst_comm_norm"] = lc.worst_comm_norm;
    return out;
}

json holonomy_report(const ParametricModel& model, const RunConfig& config) {
    if (config.path.size() < 2) {
        throw InputError("holonomy: --path with at least two waypoints is required");
    }
    json out = report_shell("holonomy", config);
    const CurvePath path(model, config.path);
    TransportOptions opts;
    opts.steps = config.steps;
    opts.tol = config.tol;
    const Amplitude w0 = positive_amplitude(model.evaluate(config.path.front()));
    const TransportResult t = relative_phase_factor(path, w0, opts);
    out["transport"] = transport_json(t);
    json wp = json::array();
    for (const auto& w : config.path) wp.push_back(rvector_to_json(w));
    out["waypoints"] = std::move(wp);
    return out;
}

EstimateOutput estimate_report(const ParametricModel& model, const RunConfig& config) {
    if (config.theta.size() != model.param_dim()) {
        throw InputError("estimate: --theta with one value per model parameter is required");
    }
    json out = report_shell("estimate", config);
    const Estimator est = optimal_estimator(model, config.theta, config.tol);

    json povm = json::array();
    for (int k = 0; k < est.povm.size(); ++k) {
        povm.push_back(json{{"label", est.povm.labels()[static_cast<size_t>(k)]},
                            {"element",
                             cmatrix_to_json(est.povm.elements()[static_cast<size_t>(k)].mat())},
                            {"estimate", rvector_to_json(est.estimates[static_cast<size_t>(k)])}});
    }
    out["estimator"] = std::move(povm);

    out["exact"] = covariance_json(exact_covariance(est, model, config.theta));
    out["monte_carlo"] = covariance_json(monte_carlo_covariance(
        est, model, config.theta, config.samples, config.seed, config.workers));

    const double h = config.fd_h > 0.0 ? config.fd_h : 1e-5;
    const UnbiasednessReport ub = check_locally_unbiased(est, model, config.theta, h);
    out["local_unbiasedness"] = json{{"mean_defect", ub.mean_defect},
                                     {"jacobian_defect", ub.jacobian_defect},
                                     {"h", ub.h}};

    const std::vector<long long> counts = sample_outcomes(
        est.povm, model.evaluate(config.theta), config.samples, config.seed, config.workers);
    return EstimateOutput{std::move(out), counts_csv(est.povm, counts)};
}

json zoo_report() {
    json models = json::array();
    for (const auto& e : zoo_catalog()) {
        models.push_back(json{{"name", e.name}, {"summary", e.summary}});
    }
    return json{{"report", "zoo"},
                {"library", "uhlmann-kit"},
                {"version", std::string(kVersion)},
                {"models", std::move(models)}};
}

}  // namespace uhlmann
