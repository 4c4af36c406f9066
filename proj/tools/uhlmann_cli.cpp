// Command-line surface for the uhlmann-kit library: model classification,
// Fisher/curvature evaluation, holonomy transport and estimation workflows
// with reproducible JSON/CSV outputs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uhlmann/reports.hpp"
#include "uhlmann/version.hpp"

namespace {

using uhlmann::InputError;
using uhlmann::RunConfig;
using uhlmann::RVector;

RVector parse_vector(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            size_t pos = 0;
            values.push_back(std::stod(token, &pos));
            if (pos != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw InputError(std::string(flag) + ": cannot parse '" + token + "' as a number");
        }
    }
    if (values.empty()) {
        throw InputError(std::string(flag) + ": empty vector");
    }
    RVector v(static_cast<Eigen::Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    return v;
}

/// Waypoints are semicolon-separated, coordinates comma-separated. For a
/// one-parameter model a bare comma list is accepted as a waypoint list.
std::vector<RVector> parse_path(const std::string& text, int param_dim) {
    std::vector<RVector> waypoints;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ';')) {
        if (!token.empty()) waypoints.push_back(parse_vector(token, "--path"));
    }
    if (waypoints.empty()) {
        throw InputError("--path: no waypoints given");
    }
    if (param_dim == 1 && waypoints.size() == 1 && waypoints.front().size() > 1) {
        const RVector flat = waypoints.front();
        waypoints.clear();
        for (Eigen::Index i = 0; i < flat.size(); ++i) {
            waypoints.push_back(RVector::Constant(1, flat(i)));
        }
    }
    for (const auto& w : waypoints) {
        if (w.size() != param_dim) {
            std::ostringstream msg;
            msg << "--path: waypoint has " << w.size() << " coordinates, model expects "
                << param_dim;
            throw InputError(msg.str());
        }
    }
    return waypoints;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("--out: cannot open '" + path + "' for writing");
    }
    out << content;
}

struct CliArgs {
    std::string zoo_name;
    std::string model_file;
    std::string theta;
    std::string path;
    RunConfig config;
};

void add_model_flags(CLI::App* cmd, CliArgs& args) {
    auto* zoo_opt = cmd->add_option("--zoo", args.zoo_name, "Builtin model name");
    auto* file_opt =
        cmd->add_option("--model", args.model_file, "JSON model file path");
    zoo_opt->excludes(file_opt);
    cmd->add_option("--levels", args.config.levels,
                    "State dimension for classical_simplex (default 2)");
}

void add_common_flags(CLI::App* cmd, CliArgs& args) {
    // --h is taken by the finite-difference step, so help is --help only.
    cmd->set_help_flag("--help", "Print help");
    cmd->add_option("--tol", args.config.tol.commutator,
                    "Commutator tolerance for classification checks");
    cmd->add_option("--h", args.config.fd_h,
                    "Finite-difference step override (default: per-model choice)");
    cmd->add_option("--out", args.config.out_path, "Output file (default stdout)");
}

void resolve_model_source(CliArgs& args) {
    if (!args.model_file.empty()) {
        args.config.model_source = "file:" + args.model_file;
    } else if (!args.zoo_name.empty()) {
        args.config.model_source = "zoo:" + args.zoo_name;
    } else {
        throw InputError("one of --zoo or --model is required");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uhlmann-kit: SLD estimation and parallel-transport toolkit"};
    app.set_version_flag("--version", std::string(uhlmann::kVersion));
    app.require_subcommand(1);

    CliArgs args;

    auto* classify = app.add_subcommand(
        "classify", "Classify a model (grid commutators, curvature, loop holonomy)");
    add_model_flags(classify, args);
    add_common_flags(classify, args);
    classify->add_option("--grid", args.config.grid_points,
                         "Grid points per parameter axis (default 3)");
    classify->add_option("--steps", args.config.steps, "ODE steps per loop check");

    auto* fisher =
        app.add_subcommand("fisher", "SLDs, Fisher matrix and curvature at a point");
    add_model_flags(fisher, args);
    add_common_flags(fisher, args);
    fisher->add_option("--theta", args.theta, "Evaluation point, comma-separated")
        ->required();

    auto* holonomy =
        app.add_subcommand("holonomy", "Horizontal lift and relative phase factor");
    add_model_flags(holonomy, args);
    add_common_flags(holonomy, args);
    holonomy
        ->add_option("--path", args.path,
                     "Waypoints, semicolon-separated; coordinates comma-separated")
        ->required();
    holonomy->add_option("--steps", args.config.steps, "ODE steps (default 512)");

    auto* estimate = app.add_subcommand(
        "estimate", "Optimal estimator with exact and Monte Carlo covariance");
    add_model_flags(estimate, args);
    add_common_flags(estimate, args);
    estimate->add_option("--theta", args.theta, "True parameter, comma-separated")
        ->required();
    estimate->add_option("--samples", args.config.samples, "Monte Carlo sample count");
    estimate->add_option("--seed", args.config.seed, "Sampling seed");
    estimate->add_option("--csv", args.config.csv_path, "Write sampled counts CSV here");

    auto* zoo_cmd = app.add_subcommand("zoo", "List builtin models");
    zoo_cmd->add_option("--out", args.config.out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (zoo_cmd->parsed()) {
            write_output(args.config.out_path, uhlmann::dump_json(uhlmann::zoo_report()));
            return 0;
        }

        resolve_model_source(args);
        auto model = uhlmann::make_model(args.config);
        if (!args.theta.empty()) {
            args.config.theta = parse_vector(args.theta, "--theta");
        }
        if (!args.path.empty()) {
            args.config.path = parse_path(args.path, model->param_dim());
        }

        if (classify->parsed()) {
            write_output(args.config.out_path,
                         uhlmann::dump_json(uhlmann::classify_report(*model, args.config)));
        } else if (fisher->parsed()) {
            write_output(args.config.out_path,
                         uhlmann::dump_json(uhlmann::fisher_report(*model, args.config)));
        } else if (holonomy->parsed()) {
            write_output(args.config.out_path,
                         uhlmann::dump_json(uhlmann::holonomy_report(*model, args.config)));
        } else if (estimate->parsed()) {
            const uhlmann::EstimateOutput result =
                uhlmann::estimate_report(*model, args.config);
            write_output(args.config.out_path, uhlmann::dump_json(result.report));
            if (!args.config.csv_path.empty()) {
                write_output(args.config.csv_path, result.csv);
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return uhlmann::exit_code_for(e);
    }
}
