#include "uhlmann/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uhlmann/zoo.hpp"

namespace uhlmann {

json cmatrix_to_json(const CMatrix& a) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json rrow = json::array(), irow = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            rrow.push_back(a(i, j).real());
            irow.push_back(a(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix cmatrix_from_json(const json& j, const std::string& field) {
    const auto fail = [&](const std::string& why) -> InputError {
        return InputError("model file: field '" + field + "': " + why);
    };
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw fail("expected an object with 're' and 'im' grids");
    }
    const json& re = j.at("re");
    const json& im = j.at("im");
    if (!re.is_array() || re.empty() || !im.is_array() || im.size() != re.size()) {
        throw fail("'re' and 'im' must be equally sized nonempty row arrays");
    }
    const size_t n = re.size();
    CMatrix a(n, n);
    for (size_t i = 0; i < n; ++i) {
        const json& rrow = re.at(i);
        const json& irow = im.at(i);
        if (!rrow.is_array() || rrow.size() != n || !irow.is_array() || irow.size() != n) {
            throw fail("rows must all have length equal to the row count");
        }
        for (size_t k = 0; k < n; ++k) {
            if (!rrow.at(k).is_number() || !irow.at(k).is_number()) {
                throw fail("entries must be numbers");
            }
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                Complex(rrow.at(k).get<double>(), irow.at(k).get<double>());
        }
    }
    return a;
}

json rvector_to_json(const RVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

RVector rvector_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw InputError("model file: field '" + field + "': expected a nonempty array");
    }
    RVector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j.at(i).is_number()) {
            throw InputError("model file: field '" + field + "': entries must be numbers");
        }
        v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    }
    return v;
}

json rmatrix_to_json(const RMatrix& a) {
    json out = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

/// Padded box around the lattice; clamp snaps to the nearest lattice point.
class LatticeDomain : public Domain {
  public:
    explicit LatticeDomain(std::vector<GridAxis> axes) : axes_(std::move(axes)) {}

    int dim() const override { return static_cast<int>(axes_.size()); }

    std::optional<DomainViolation> violation(const RVector& theta) const override {
        if (theta.size() != dim()) {
            return DomainViolation{-1, "theta has wrong dimension"};
        }
        for (size_t i = 0; i < axes_.size(); ++i) {
            const auto& ax = axes_[i];
            const double lo = ax.start - 0.5 * ax.step;
            const double hi = ax.start + ax.step * (ax.count - 1) + 0.5 * ax.step;
            const double t = theta(static_cast<Eigen::Index>(i));
            if (!(t > lo && t < hi)) {
                std::ostringstream msg;
                msg << "coordinate " << i << " = " << t << " outside lattice range ["
                    << ax.start << ", " << ax.start + ax.step * (ax.count - 1) << "]";
                return DomainViolation{static_cast<int>(i), msg.str()};
            }
        }
        return std::nullopt;
    }

    RVector clamp_interior(const RVector& theta, double) const override {
        RVector out(dim());
        for (size_t i = 0; i < axes_.size(); ++i) {
            const auto& ax = axes_[i];
            double idx = std::round((theta(static_cast<Eigen::Index>(i)) - ax.start) / ax.step);
            idx = std::min(std::max(idx, 0.0), static_cast<double>(ax.count - 1));
            out(static_cast<Eigen::Index>(i)) = ax.start + idx * ax.step;
        }
        return out;
    }

    std::pair<RVector, RVector> bounding_box() const override {
        RVector lo(dim()), hi(dim());
        for (size_t i = 0; i < axes_.size(); ++i) {
            lo(static_cast<Eigen::Index>(i)) = axes_[i].start;
            hi(static_cast<Eigen::Index>(i)) = axes_[i].start + axes_[i].step * (axes_[i].count - 1);
        }
        return {lo, hi};
    }

    std::string describe() const override {
        std::ostringstream s;
        s << "lattice";
        for (const auto& ax : axes_) {
            s << " [" << ax.start << " : " << ax.step << " : "
              << ax.start + ax.step * (ax.count - 1) << "]";
        }
        s << " (evaluation only at lattice points)";
        return s.str();
    }

  private:
    std::vector<GridAxis> axes_;
};

}  // namespace

GridModel::GridModel(std::vector<GridAxis> axes, std::vector<DensityMatrix> states)
    : axes_(std::move(axes)), states_(std::move(states)) {
    if (axes_.empty()) {
        throw InputError("grid model: at least one axis required");
    }
    size_t expected = 1;
    for (size_t i = 0; i < axes_.size(); ++i) {
        const auto& ax = axes_[i];
        if (ax.count < 2 || !(ax.step > 0)) {
            std::ostringstream msg;
            msg << "grid model: axis " << i << " needs count >= 2 and step > 0";
            throw InputError(msg.str());
        }
        expected *= static_cast<size_t>(ax.count);
    }
    if (states_.size() != expected) {
        std::ostringstream msg;
        msg << "grid model: expected " << expected << " states, got " << states_.size();
        throw InputError(msg.str());
    }
    for (const auto& s : states_) {
        if (s.dim() != states_.front().dim()) {
            throw InputError("grid model: states must share one dimension");
        }
    }
    domain_ = std::make_unique<LatticeDomain>(axes_);
}

double GridModel::fd_step(const RVector&, int i) const {
    return axes_[static_cast<size_t>(i)].step;
}

DensityMatrix GridModel::evaluate_unchecked(const RVector& theta) const {
    size_t flat = 0;
    for (size_t i = 0; i < axes_.size(); ++i) {
        const auto& ax = axes_[i];
        const double t = theta(static_cast<Eigen::Index>(i));
        const double pos = (t - ax.start) / ax.step;
        const double idx = std::round(pos);
        if (std::abs(pos - idx) > 1e-6 || idx < 0 || idx >= ax.count) {
            std::ostringstream msg;
            msg << "grid model: coordinate " << i << " = " << t
                << " is not a lattice point; grid models forbid interpolation";
            throw DomainError(msg.str());
        }
        flat = flat * static_cast<size_t>(ax.count) + static_cast<size_t>(idx);
    }
    return states_[flat];
}

std::unique_ptr<ParametricModel> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("model file: cannot open '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("model file: invalid JSON in '" + path + "': " + e.what());
    }
    return model_from_json(j);
}

std::unique_ptr<ParametricModel> model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw InputError("model file: field 'kind': required string");
    }
    const std::string kind = j.at("kind").get<std::string>();

    const auto require_int = [&](const char* field) -> int {
        if (!j.contains(field) || !j.at(field).is_number_integer()) {
            throw InputError(std::string("model file: field '") + field +
                             "': required integer");
        }
        return j.at(field).get<int>();
    };

    const auto wrap = [&](const char* field, auto&& fn) {
        try {
            return fn();
        } catch (const InputError& e) {
            throw InputError(std::string("model file: field '") + field + "': " + e.what());
        }
    };

    if (kind == "parallel_exp") {
        const int n = require_int("n");
        const int m = require_int("m");
        if (!j.contains("generators") || !j.at("generators").is_array() ||
            j.at("generators").size() != static_cast<size_t>(m)) {
            throw InputError("model file: field 'generators': required array of m matrices");
        }
        std::vector<HermitianMatrix> gens;
        for (size_t i = 0; i < j.at("generators").size(); ++i) {
            const std::string field = "generators[" + std::to_string(i) + "]";
            const CMatrix g = cmatrix_from_json(j.at("generators").at(i), field);
            if (g.rows() != n) {
                throw InputError("model file: field '" + field + "': dimension must be n");
            }
            gens.push_back(wrap(field.c_str(), [&] { return HermitianMatrix(g); }));
        }
        if (!j.contains("base_state")) {
            throw InputError("model file: field 'base_state': required matrix");
        }
        const CMatrix rho0 = cmatrix_from_json(j.at("base_state"), "base_state");
        if (rho0.rows() != n) {
            throw InputError("model file: field 'base_state': dimension must be n");
        }
        auto base = wrap("base_state", [&] { return DensityMatrix(rho0); });
        const double radius = j.value("radius", 1.5);
        return wrap("generators", [&] {
            return std::unique_ptr<ParametricModel>(
                make_parallel_exp(std::move(gens), std::move(base), radius));
        });
    }

    if (kind == "grid") {
        const int n = require_int("n");
        const int m = require_int("m");
        if (!j.contains("axes") || !j.at("axes").is_array() ||
            j.at("axes").size() != static_cast<size_t>(m)) {
            throw InputError("model file: field 'axes': required array of m axis objects");
        }
        std::vector<GridAxis> axes;
        for (size_t i = 0; i < j.at("axes").size(); ++i) {
            const json& a = j.at("axes").at(i);
            const std::string field = "axes[" + std::to_string(i) + "]";
            if (!a.is_object() || !a.contains("start") || !a.contains("step") ||
                !a.contains("count")) {
                throw InputError("model file: field '" + field +
                                 "': required {start, step, count}");
            }
            axes.push_back(GridAxis{a.at("start").get<double>(), a.at("step").get<double>(),
                                    a.at("count").get<int>()});
        }
        if (!j.contains("states") || !j.at("states").is_array()) {
            throw InputError("model file: field 'states': required array of matrices");
        }
        std::vector<DensityMatrix> states;
        for (size_t i = 0; i < j.at("states").size(); ++i) {
            const std::string field = "states[" + std::to_string(i) + "]";
            const CMatrix s = cmatrix_from_json(j.at("states").at(i), field);
            if (s.rows() != n) {
                throw InputError("model file: field '" + field + "': dimension must be n");
            }
            states.push_back(wrap(field.c_str(), [&] { return DensityMatrix(s); }));
        }
        return std::make_unique<GridModel>(std::move(axes), std::move(states));
    }

    if (kind == "zoo") {
        if (!j.contains("name") || !j.at("name").is_string()) {
            throw InputError("model file: field 'name': required string");
        }
        ZooParams params;
        params.levels = j.value("levels", 2);
        const std::string name = j.at("name").get<std::string>();
        if (name == "user_file") {
            throw InputError("model file: field 'name': user_file cannot nest");
        }
        return zoo(name, params);
    }

    throw InputError("model file: field 'kind': unknown kind '" + kind +
                     "' (expected grid, parallel_exp or zoo)");
}

}  // namespace uhlmann
