#pragma once

#include <memory>
#include <string>
#include <vector>

#include "uhlmann/model.hpp"

namespace uhlmann {

/// m = 3 Bloch ball model rho = (I + theta . sigma)/2, |theta| < 1.
std::unique_ptr<ParametricModel> make_bloch_full();

/// m = 2 equatorial Bloch model rho = (I + theta^1 sx + theta^2 sy)/2.
std::unique_ptr<ParametricModel> make_bloch_equator2();

/// Diagonal family on `levels` levels, m = levels - 1:
/// rho = diag(theta_1, ..., theta_{m}, 1 - sum theta).
std::unique_ptr<ParametricModel> make_classical_simplex(int levels);

/// ParallelExpModel with user generators; see model.hpp.
std::unique_ptr<ParallelExpModel> make_parallel_exp(std::vector<HermitianMatrix> generators,
                                                    DensityMatrix base_state,
                                                    double box_radius = 1.5);

/// Default single-parameter qubit instance: X = sigma_z, rho0 = diag(0.7, 0.3).
std::unique_ptr<ParallelExpModel> make_parallel_exp_default();

/// Two-parameter two-qubit instance with generators sz(x)I and I(x)sz.
std::unique_ptr<ParallelExpModel> make_parallel_exp_two_qubit();

struct ZooParams {
    int levels = 2;        ///< classical_simplex state dimension
    std::string path;      ///< user_file model path
};

/// Builtin lookup: bloch_full, bloch_equator2, classical_simplex,
/// parallel_exp (the default qubit instance), user_file (JSON model file).
/// Unknown names raise InputError listing the valid names.
std::unique_ptr<ParametricModel> zoo(const std::string& name, const ZooParams& params = {});

struct ZooEntry {
    std::string name;
    std::string summary;
};

const std::vector<ZooEntry>& zoo_catalog();

}  // namespace uhlmann
