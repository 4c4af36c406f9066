#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uhlmann/estimation.hpp"
#include "uhlmann/model_io.hpp"
#include "uhlmann/transport.hpp"

namespace uhlmann {

/// Effective configuration of one workflow run. Every field has a default;
/// the whole struct is echoed into each report, so outputs are
/// self-describing. Worker count is deliberately not part of the echo: it
/// never affects results.
struct RunConfig {
    std::string model_source = "zoo:bloch_full";  ///< "zoo:<name>" or "file:<path>"
    int levels = 2;               ///< classical_simplex levels
    RVector theta;                ///< evaluation point, where applicable
    std::vector<RVector> path;    ///< holonomy waypoints
    int grid_points = 3;          ///< classify: lattice points per parameter axis
    Tolerances tol{};
    int steps = 512;              ///< ODE steps per lift
    double fd_h = 0.0;            ///< 0 keeps each model's own step choice
    std::uint64_t seed = 0;
    long long samples = 100000;
    int workers = 0;              ///< 0 = auto; capped by UHLMANN_KIT_THREADS
    std::string out_path;         ///< empty = stdout
    std::string csv_path;         ///< estimate: optional counts CSV
};

/// Builds the model named by config.model_source.
std::unique_ptr<ParametricModel> make_model(const RunConfig& config);

/// Serializes with deterministic key order and 17-significant-digit
/// decimals, so equal configs give byte-identical files and doubles
/// round-trip losslessly.
std::string dump_json(const json& j, int indent = 2);

json config_json(const RunConfig& config);

/// Grid/local classification, per-point curvature-commutator checks and
/// loop holonomy spot checks, with a single combined verdict.
json classify_report(const ParametricModel& model, const RunConfig& config);

/// J^S, SLDs and F_ij at config.theta.
json fisher_report(const ParametricModel& model, const RunConfig& config);

/// Transport result for the configured waypoint path.
json holonomy_report(const ParametricModel& model, const RunConfig& config);

struct EstimateOutput {
    json report;
    std::string csv;  ///< sampled counts, "outcome,count"
};

/// Theorem-1 estimator at config.theta with exact and Monte Carlo
/// covariance and the covariance-bound gap.
EstimateOutput estimate_report(const ParametricModel& model, const RunConfig& config);

json zoo_report();

}  // namespace uhlmann
