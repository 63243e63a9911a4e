// Command-line front end: scenario presets, simulation runs, reproduction-number
// reports, parameter sweeps and plot-data extraction.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plankton/config.hpp"
#include "plankton/io.hpp"
#include "plankton/scenarios.hpp"

namespace {

using namespace plankton;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
    std::string preset;
    std::string config_path;
    std::string out_dir = ".";
    int grid_nodes = 0;       // 0: keep config value
    std::string dt_spec;      // "T/2000" or a plain time step
    int horizon_periods = 0;  // 0: keep config value
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--preset", opts.preset, "built-in scenario name (see `scenarios`)");
    cmd->add_option("--config", opts.config_path, "JSON scenario config path");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--grid", opts.grid_nodes, "grid node count override");
    cmd->add_option("--dt", opts.dt_spec, "time step: 'T/<k>' or a plain number");
    cmd->add_option("--periods", opts.horizon_periods, "horizon in periods");
}

int steps_from_dt_spec(const std::string& spec, double period) {
    if (spec.rfind("T/", 0) == 0) {
        const int k = std::stoi(spec.substr(2));
        if (k < 1) throw ConfigError("--dt: the divisor in T/<k> must be positive");
        return k;
    }
    const double dt = std::stod(spec);
    if (!(dt > 0.0)) throw ConfigError("--dt must be positive");
    const int k = static_cast<int>(std::lround(period / dt));
    return std::max(k, 1);
}

ScenarioConfig load_config(const CommonOptions& opts) {
    if (opts.preset.empty() == opts.config_path.empty()) {
        throw ConfigError("provide exactly one of --preset and --config");
    }
    ScenarioConfig config = opts.preset.empty() ? parse_config_file(opts.config_path)
                                                : config_from_preset(opts.preset);
    if (opts.grid_nodes > 0) config.grid_nodes = opts.grid_nodes;
    if (!opts.dt_spec.empty()) {
        config.stepping.steps_per_period = steps_from_dt_spec(opts.dt_spec, config.model.period);
    }
    if (opts.horizon_periods > 0) config.stepping.horizon_periods = opts.horizon_periods;
    config.output_dir = opts.out_dir;

    for (const auto& w : validate(config.model).warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    return config;
}

std::string config_label(const CommonOptions& opts) {
    return opts.preset.empty() ? std::filesystem::path(opts.config_path).stem().string()
                               : opts.preset;
}

StateProfile initial_profile(const ScenarioConfig& config, const Grid& grid) {
    switch (config.initial.kind) {
        case InitialCondition::Kind::preset_z0:
            return preset_initial_profile(grid);
        case InitialCondition::Kind::constant:
            return StateProfile::constant(grid, config.initial.value);
        case InitialCondition::Kind::file: {
            std::ifstream in(config.initial.path);
            if (!in) throw IoError("cannot open initial profile '" + config.initial.path + "'");
            StateProfile profile = StateProfile::zeros(grid);
            double v = 0.0;
            int count = 0;
            while (in >> v) {
                if (count < grid.n) profile.values[count] = v;
                ++count;
            }
            if (count != grid.n) {
                throw ConfigError("initial profile '" + config.initial.path + "' holds " +
                                  std::to_string(count) + " values, grid needs " +
                                  std::to_string(grid.n));
            }
            return profile;
        }
    }
    throw ConfigError("unreachable initial condition kind");
}

int run_scenarios() {
    for (const auto& s : scenarios()) {
        std::cout << s.name << "\t" << s.description << "\n";
    }
    return 0;
}

int run_simulate(const CommonOptions& opts) {
    const ScenarioConfig config = load_config(opts);
    const Grid grid = Grid::uniform(config.grid_nodes, config.model.column_depth);
    std::filesystem::create_directories(config.output_dir);

    const auto transport = assemble_transport(config.model, grid, 0.0);
    if (transport.peclet_warning) {
        std::cerr << "warning: cell Peclet number " << format_double(transport.max_cell_peclet)
                  << " >= 1; the centered scheme may need a finer grid\n";
    }

    const Trajectory traj =
        simulate(config.model, initial_profile(config, grid), grid, config.stepping);
    const DynamicsVerdict verdict = classify(traj, config.stepping.thresholds);

    const auto dir = std::filesystem::path(config.output_dir);
    write_trajectory_csv((dir / "trajectory.csv").string(), traj);
    write_diagnostics_csv((dir / "diagnostics.csv").string(), traj);

    std::cout << "verdict: " << to_string(verdict.kind)
              << " (decay/period " << format_double(verdict.decay_factor_per_period)
              << ", period residual " << format_double(verdict.period_residual) << ")\n";
    return 0;
}

int run_r0(const CommonOptions& opts, bool with_bounds, bool with_star) {
    const ScenarioConfig config = load_config(opts);
    if (with_bounds && config.model.advection != 0.0) {
        throw ConfigError("--bounds needs alpha = 0");
    }
    const Grid grid = Grid::uniform(config.grid_nodes, config.model.column_depth);
    std::filesystem::create_directories(config.output_dir);

    const R0Report report = compute_r0(config.model, grid, config.eigen);
    std::cout << "R0       = " << format_double(report.r0) << "\n"
              << "lambda0  = " << format_double(report.lambda0) << "\n"
              << "residual = " << format_double(report.multiplier_residual) << " ("
              << report.bisections << " bisections, " << report.power_iterations
              << " power iterations)\n";
    if (with_star) {
        std::cout << "R0*      = " << format_double(report.r0_star.value()) << " ("
                  << format_double(report.r0_star.numerator) << " / "
                  << format_double(report.r0_star.denominator) << ")\n"
                  << "lower    = " << format_double(report.lower_bound.value()) << "\n";
    }
    if (with_bounds && report.bounds) {
        std::cout << "R2       = " << format_double(report.bounds->lower.value()) << " ("
                  << format_double(report.bounds->lower.numerator) << " / "
                  << format_double(report.bounds->lower.denominator) << ")\n"
                  << "R1       = " << format_double(report.bounds->upper.value()) << " ("
                  << format_double(report.bounds->upper.numerator) << " / "
                  << format_double(report.bounds->upper.denominator) << ")\n";
    }

    const auto dir = std::filesystem::path(config.output_dir);
    append_r0_report_csv((dir / "r0_report.csv").string(), config_label(opts), report);
    return 0;
}

std::vector<double> sweep_values(const std::string& range_spec, bool log_spaced) {
    const auto first_colon = range_spec.find(':');
    const auto second_colon =
        first_colon == std::string::npos ? std::string::npos
                                         : range_spec.find(':', first_colon + 1);
    if (second_colon == std::string::npos) {
        throw ConfigError("--range must look like start:stop:count");
    }
    const double start = std::stod(range_spec.substr(0, first_colon));
    const double stop =
        std::stod(range_spec.substr(first_colon + 1, second_colon - first_colon - 1));
    const int count = std::stoi(range_spec.substr(second_colon + 1));
    if (count < 1) throw ConfigError("--range: count must be at least 1");
    if (count == 1) return {start};
    if (!(stop > start)) throw ConfigError("--range: stop must exceed start");
    if (log_spaced && !(start > 0.0)) throw ConfigError("--range: log spacing needs start > 0");

    std::vector<double> values(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i) / (count - 1);
        values[static_cast<size_t>(i)] =
            log_spaced ? start * std::pow(stop / start, frac) : start + frac * (stop - start);
    }
    return values;
}

int run_sweep(const CommonOptions& opts, const std::string& parameter,
              const std::string& range_spec, bool log_spaced) {
    const ScenarioConfig config = load_config(opts);
    SweepParameter param;
    if (parameter == "L0") {
        param = SweepParameter::column_depth;
    } else if (parameter == "D") {
        param = SweepParameter::diffusion;
    } else if (parameter == "alpha") {
        param = SweepParameter::advection;
    } else if (parameter == "sigma") {
        param = SweepParameter::sigma;
    } else {
        throw ConfigError("--param must be one of L0, D, alpha, sigma");
    }

    const Grid grid = Grid::uniform(config.grid_nodes, config.model.column_depth);
    std::filesystem::create_directories(config.output_dir);
    const auto rows = sweep_r0(config.model, param, sweep_values(range_spec, log_spaced), grid,
                               config.eigen);
    write_sweep_csv((std::filesystem::path(config.output_dir) / "sweep.csv").string(), parameter,
                    rows);

    bool decreasing = true, increasing = true;
    int failures = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (const auto& row : rows) {
        if (row.status != "ok") {
            ++failures;
            continue;
        }
        if (have_prev) {
            decreasing = decreasing && row.r0 < prev;
            increasing = increasing && row.r0 > prev;
        }
        prev = row.r0;
        have_prev = true;
    }
    std::cout << "sweep " << parameter << ": "
              << (failures == static_cast<int>(rows.size()) ? "all rows failed"
                  : decreasing                              ? "R0 strictly decreasing"
                  : increasing                              ? "R0 strictly increasing"
                                                            : "R0 not monotone")
              << (failures > 0 ? " (" + std::to_string(failures) + " failed rows)" : "") << "\n";
    return failures == static_cast<int>(rows.size()) ? kExitNumerical : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Light-limited phytoplankton in a periodically evolving water column:\n"
                 "simulation, reproduction-number analysis and threshold diagnostics"};
    app.require_subcommand(1);

    CommonOptions opts;

    auto* cmd_scenarios = app.add_subcommand("scenarios", "list built-in presets");

    auto* cmd_simulate = app.add_subcommand("simulate", "integrate the full system and classify");
    add_common(cmd_simulate, opts);

    bool with_bounds = false, with_star = false;
    auto* cmd_r0 = app.add_subcommand("r0", "compute the basic reproduction number");
    add_common(cmd_r0, opts);
    cmd_r0->add_flag("--bounds", with_bounds, "print the closed-form bounds (alpha = 0 only)");
    cmd_r0->add_flag("--star", with_star, "print the vanishing-transport limit and lower bound");

    std::string sweep_param, sweep_range;
    bool sweep_log = false;
    auto* cmd_sweep = app.add_subcommand("sweep", "R0 across a parameter range");
    add_common(cmd_sweep, opts);
    cmd_sweep->add_option("--param", sweep_param, "one of L0, D, alpha, sigma")->required();
    cmd_sweep->add_option("--range", sweep_range, "start:stop:count")->required();
    cmd_sweep->add_flag("--log", sweep_log, "geometric spacing");

    std::string plot_input, plot_mode = "heatmap", plot_out = "plotdata.csv";
    auto* cmd_plot = app.add_subcommand("plotdata", "transform a trajectory CSV for plotting");
    cmd_plot->add_option("--input", plot_input, "trajectory.csv path")->required();
    cmd_plot->add_option("--mode", plot_mode, "heatmap | cross-section | contour");
    cmd_plot->add_option("--out", plot_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (cmd_scenarios->parsed()) return run_scenarios();
        if (cmd_simulate->parsed()) return run_simulate(opts);
        if (cmd_r0->parsed()) return run_r0(opts, with_bounds, with_star);
        if (cmd_sweep->parsed()) return run_sweep(opts, sweep_param, sweep_range, sweep_log);
        if (cmd_plot->parsed()) {
            emit_plotdata(plot_input, plot_mode_from_string(plot_mode), plot_out);
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
