#include "uhlmann/zoo.hpp"

#include <sstream>

#include "uhlmann/model_io.hpp"

namespace uhlmann {

namespace {

class BlochModel : public ParametricModel {
  public:
    explicit BlochModel(int axes)
        : axes_(axes), domain_(axes, 1.0), sigma_{pauli_x(), pauli_y(), pauli_z()} {}

    std::string name() const override {
        return axes_ == 3 ? "bloch_full" : "bloch_equator2";
    }
    int state_dim() const override { return 2; }
    const Domain& domain() const override { return domain_; }
    bool has_analytic_derivative() const override { return true; }

    HermitianMatrix analytic_derivative(const RVector&, int i) const override {
        return HermitianMatrix(0.5 * sigma_[static_cast<size_t>(i)]);
    }

  protected:
    DensityMatrix evaluate_unchecked(const RVector& theta) const override {
        CMatrix rho = 0.5 * identity(2);
        for (int i = 0; i < axes_; ++i) {
            rho += 0.5 * theta(i) * sigma_[static_cast<size_t>(i)];
        }
        return DensityMatrix(rho);
    }

  private:
    int axes_;
    BallDomain domain_;
    CMatrix sigma_[3];
};

class ClassicalSimplexModel : public ParametricModel {
  public:
    explicit ClassicalSimplexModel(int levels) : levels_(levels), domain_(levels - 1) {
        if (levels < 2) {
            throw InputError("classical_simplex: levels must be >= 2");
        }
    }

    std::string name() const override { return "classical_simplex"; }
    int state_dim() const override { return levels_; }
    const Domain& domain() const override { return domain_; }
    bool has_analytic_derivative() const override { return true; }

    HermitianMatrix analytic_derivative(const RVector&, int i) const override {
        CMatrix d = CMatrix::Zero(levels_, levels_);
        d(i, i) = 1.0;
        d(levels_ - 1, levels_ - 1) = -1.0;
        return HermitianMatrix(d);
    }

  protected:
    DensityMatrix evaluate_unchecked(const RVector& theta) const override {
        CMatrix rho = CMatrix::Zero(levels_, levels_);
        for (int i = 0; i < levels_ - 1; ++i) {
            rho(i, i) = theta(i);
        }
        rho(levels_ - 1, levels_ - 1) = 1.0 - theta.sum();
        return DensityMatrix(rho);
    }

  private:
    int levels_;
    SimplexDomain domain_;
};

}  // namespace

std::unique_ptr<ParametricModel> make_bloch_full() {
    return std::make_unique<BlochModel>(3);
}

std::unique_ptr<ParametricModel> make_bloch_equator2() {
    return std::make_unique<BlochModel>(2);
}

std::unique_ptr<ParametricModel> make_classical_simplex(int levels) {
    return std::make_unique<ClassicalSimplexModel>(levels);
}

std::unique_ptr<ParallelExpModel> make_parallel_exp(std::vector<HermitianMatrix> generators,
                                                    DensityMatrix base_state,
                                                    double box_radius) {
    return std::make_unique<ParallelExpModel>(std::move(generators), std::move(base_state),
                                              box_radius);
}

std::unique_ptr<ParallelExpModel> make_parallel_exp_default() {
    CMatrix rho0(2, 2);
    rho0 << 0.7, 0, 0, 0.3;
    return make_parallel_exp({HermitianMatrix(pauli_z())}, DensityMatrix(rho0));
}

std::unique_ptr<ParallelExpModel> make_parallel_exp_two_qubit() {
    CMatrix zz = CMatrix::Zero(4, 4);
    zz.diagonal() << 1, 1, -1, -1;  // sz (x) I
    CMatrix iz = CMatrix::Zero(4, 4);
    iz.diagonal() << 1, -1, 1, -1;  // I (x) sz
    CMatrix rho0 = CMatrix::Zero(4, 4);
    rho0.diagonal() << 0.4, 0.3, 0.2, 0.1;
    return make_parallel_exp({HermitianMatrix(zz), HermitianMatrix(iz)}, DensityMatrix(rho0),
                             1.0);
}

std::unique_ptr<ParametricModel> zoo(const std::string& name, const ZooParams& params) {
    if (name == "bloch_full") return make_bloch_full();
    if (name == "bloch_equator2") return make_bloch_equator2();
    if (name == "classical_simplex") return make_classical_simplex(params.levels);
    if (name == "parallel_exp") return make_parallel_exp_default();
    if (name == "user_file") {
        if (params.path.empty()) {
            throw InputError("zoo: user_file requires a model file path");
        }
        return load_model(params.path);
    }
    std::ostringstream msg;
    msg << "zoo: unknown model '" << name << "'; valid names:";
    for (const auto& e : zoo_catalog()) {
        msg << " " << e.name;
    }
    throw InputError(msg.str());
}

const std::vector<ZooEntry>& zoo_catalog() {
    static const std::vector<ZooEntry> entries = {
        {"bloch_full", "qubit Bloch ball, m=3, |theta|<1; SLDs do not commute"},
        {"bloch_equator2", "qubit equatorial plane, m=2; locally non-commuting SLDs"},
        {"classical_simplex", "diagonal family on n levels, m=n-1; quasi-classical"},
        {"parallel_exp", "commuting exponential family M(theta) rho0 M(theta); parallel"},
        {"user_file", "model loaded from a JSON file (kinds: grid, parallel_exp, zoo)"},
    };
    return entries;
}

}  // namespace uhlmann
