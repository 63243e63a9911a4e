#pragma once

#include <string>
#include <vector>

#include "plankton/grid.hpp"
#include "plankton/model.hpp"

namespace plankton {

/// Built-in scenario presets covering the canonical parameter sets.
struct Scenario {
    std::string name;
    std::string description;
    ModelParameters params;
};

const std::vector<Scenario>& scenarios();

/// Lookup by name; throws ConfigError for unknown names.
const Scenario& scenario(const std::string& name);

/// Canonical initial profile z0(y) = 4 + 2 cos(pi y) + cos(2 pi y), z-form.
StateProfile preset_initial_profile(const Grid& grid);

}  // namespace plankton
