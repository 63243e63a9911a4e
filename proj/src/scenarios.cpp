#include "plankton/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace plankton {

namespace {

constexpr double kPeriod = 2.0 * std::numbers::pi / 3.0;

ModelParameters shallow_column(double death_offset, double death_slope, double sigma) {
    ModelParameters p;
    p.diffusion = 0.001;
    p.advection = 0.001;
    p.background_turbidity = 0.2;
    p.shading = 0.2;
    p.growth = {3.0, 2.0};
    p.light = LightSchedule::constant(0.1);
    p.death = DeathField::affine(death_offset, death_slope);
    p.evolution = EvolutionProfile::exp_cosine(sigma, kPeriod);
    p.column_depth = 1.0;
    p.period = kPeriod;
    return p;
}

ModelParameters dim_light_column(double death_slope, double column_depth) {
    ModelParameters p;
    p.diffusion = 0.001;
    p.advection = 0.0;
    p.background_turbidity = 0.02;
    p.shading = 0.02;
    p.growth = {1.0, 3.0};
    p.light = LightSchedule::constant(2.0);
    p.death = DeathField::affine(0.29, death_slope);
    p.evolution = EvolutionProfile::exp_cosine(-0.5, kPeriod);
    p.column_depth = column_depth;
    p.period = kPeriod;
    return p;
}

std::vector<Scenario> make_scenarios() {
    // Regime notes state the computed reproduction numbers at the listed
    // parameters (weak mixing keeps the favourable surface decisive in the
    // first four cases).
    return {
        {"example-4.1a",
         "fixed column, d = 0.2 + 0.1 x: R0 = 1.09, persists as a surface bloom",
         shallow_column(0.2, 0.1, 0.0)},
        {"example-4.1b",
         "shrinking-pulse column (sigma = -0.5), d = 0.2 + 0.1 x: R0 = 1.07, "
         "settles on a positive periodic cycle",
         shallow_column(0.2, 0.1, -0.5)},
        {"example-4.2a",
         "fixed column, d = 0.1 + 0.2 x: R0 = 1.78, persists",
         shallow_column(0.1, 0.2, 0.0)},
        {"example-4.2b",
         "growing-pulse column (sigma = +0.5), d = 0.1 + 0.2 x: R0 = 1.72, persists",
         shallow_column(0.1, 0.2, 0.5)},
        {"example-4.3a",
         "deep dim-lit column (L0 = 3), d = 0.29 + 3 x, no advection: R0 = 0.54, dies out",
         dim_light_column(3.0, 3.0)},
        {"example-4.3b",
         "shallow dim-lit column (L0 = 1), d = 0.29 + 0.1 x, no advection: R0 = 0.91, "
         "dies out",
         dim_light_column(0.1, 1.0)},
    };
}

}  // namespace

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> all = make_scenarios();
    return all;
}

const Scenario& scenario(const std::string& name) {
    for (const auto& s : scenarios()) {
        if (s.name == name) return s;
    }
    throw ConfigError("unknown scenario preset '" + name + "' (see the scenarios subcommand)");
}

StateProfile preset_initial_profile(const Grid& grid) {
    StateProfile profile = StateProfile::zeros(grid, ProfileForm::z);
    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.node(i);
        profile.values[i] = 4.0 + 2.0 * std::cos(std::numbers::pi * y) +
                            std::cos(2.0 * std::numbers::pi * y);
    }
    return profile;
}

}  // namespace plankton
