#pragma once

#include <nlohmann/json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "uhlmann/model.hpp"

namespace uhlmann {

using nlohmann::json;

/// Complex matrices serialize as two real grids: {"re": [[..]], "im": [[..]]}.
json cmatrix_to_json(const CMatrix& a);
CMatrix cmatrix_from_json(const json& j, const std::string& field);

json rvector_to_json(const RVector& v);
RVector rvector_from_json(const json& j, const std::string& field);

json rmatrix_to_json(const RMatrix& a);

/// Uniform lattice along one parameter axis.
struct GridAxis {
    double start;
    double step;
    int count;
};

/// Model given by states tabulated on a lattice of theta values. There is
/// no interpolation: evaluation is only defined at lattice points, and
/// derivatives use lattice-step central differences. States are stored
/// row-major with the last axis fastest.
class GridModel : public ParametricModel {
  public:
    GridModel(std::vector<GridAxis> axes, std::vector<DensityMatrix> states);

    std::string name() const override { return "grid"; }
    int state_dim() const override { return static_cast<int>(states_.front().dim()); }
    const Domain& domain() const override { return *domain_; }
    double fd_step(const RVector& theta, int i) const override;

    const std::vector<GridAxis>& axes() const { return axes_; }

  protected:
    DensityMatrix evaluate_unchecked(const RVector& theta) const override;

  private:
    std::vector<GridAxis> axes_;
    std::vector<DensityMatrix> states_;
    std::unique_ptr<Domain> domain_;
};

/// Loads a model from the JSON model-file format:
///   {"kind": "parallel_exp", "n": .., "m": .., "generators": [..],
///    "base_state": {..}, "radius": ..}
///   {"kind": "grid", "n": .., "m": .., "axes": [{"start","step","count"},..],
///    "states": [..]}
///   {"kind": "zoo", "name": "..", "levels": ..}
/// Raises InputError naming the offending field on malformed input.
std::unique_ptr<ParametricModel> load_model(const std::string& path);
std::unique_ptr<ParametricModel> model_from_json(const json& j);

}  // namespace uhlmann
