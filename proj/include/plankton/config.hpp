#pragma once

#include <string>

#include "plankton/floquet.hpp"
#include "plankton/model.hpp"
#include "plankton/timestep.hpp"

namespace plankton {

struct InitialCondition {
    enum class Kind { preset_z0, constant, file };
    Kind kind = Kind::preset_z0;
    double value = 1.0;  // constant mode
    std::string path;    // file mode: one nodal value per line, z-form
};

/// A full run description: model, numerical settings, initial data, output.
struct ScenarioConfig {
    ModelParameters model;
    int grid_nodes = 201;
    SteppingConfig stepping;
    EigenSolveConfig eigen;
    InitialCondition initial;
    std::string output_dir = ".";
};

/// Builds a config around a named preset with default numerics.
ScenarioConfig config_from_preset(const std::string& preset_name);

/// Parses and validates a JSON scenario config. Unknown keys are hard errors;
/// model invariant breaches raise ConfigError carrying the validation report.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Inverse of parse_config_text up to JSON formatting; numeric fields
/// round-trip exactly.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace plankton
