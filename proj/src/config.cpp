#include "plankton/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plankton/scenarios.hpp"

namespace plankton {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

void reject_unknown_keys(const json& object, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(where, "unknown key '" + item.key() + "'");
    }
}

double require_number(const json& object, const std::string& where, const char* key) {
    if (!object.contains(key)) fail(where, std::string("missing key '") + key + "'");
    if (!object[key].is_number()) fail(where, std::string("'") + key + "' must be a number");
    return object[key].get<double>();
}

double number_or(const json& object, const std::string& where, const char* key,
                 double fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_number()) fail(where, std::string("'") + key + "' must be a number");
    return object[key].get<double>();
}

int integer_or(const json& object, const std::string& where, const char* key, int fallback) {
    if (!object.contains(key)) return fallback;
    if (!object[key].is_number_integer()) {
        fail(where, std::string("'") + key + "' must be an integer");
    }
    return object[key].get<int>();
}

std::string require_string(const json& object, const std::string& where, const char* key) {
    if (!object.contains(key)) fail(where, std::string("missing key '") + key + "'");
    if (!object[key].is_string()) fail(where, std::string("'") + key + "' must be a string");
    return object[key].get<std::string>();
}

std::vector<double> require_number_array(const json& object, const std::string& where,
                                         const char* key) {
    if (!object.contains(key) || !object[key].is_array()) {
        fail(where, std::string("'") + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : object[key]) {
        if (!v.is_number()) fail(where, std::string("'") + key + "' must hold numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

LightSchedule parse_light(const json& j, double period) {
    const std::string where = "model.light";
    reject_unknown_keys(j, where, {"mode", "I0", "values"});
    const std::string mode = require_string(j, where, "mode");
    if (mode == "constant") {
        return LightSchedule::constant(require_number(j, where, "I0"));
    }
    if (mode == "sampled") {
        return LightSchedule::sampled(require_number_array(j, where, "values"), period);
    }
    fail(where, "mode must be 'constant' or 'sampled'");
}

DeathField parse_death(const json& j, double period) {
    const std::string where = "model.death";
    reject_unknown_keys(j, where, {"mode", "c0", "c1", "values", "x_max", "monotone"});
    const std::string mode = require_string(j, where, "mode");
    if (mode == "affine") {
        return DeathField::affine(require_number(j, where, "c0"), require_number(j, where, "c1"));
    }
    if (mode == "sampled") {
        if (!j.contains("values") || !j["values"].is_array() || j["values"].empty() ||
            !j["values"][0].is_array()) {
            fail(where, "'values' must be an array of per-time rows");
        }
        const int nt = static_cast<int>(j["values"].size());
        const int nx = static_cast<int>(j["values"][0].size());
        std::vector<double> flat;
        flat.reserve(static_cast<size_t>(nt) * nx);
        for (const auto& row : j["values"]) {
            if (!row.is_array() || static_cast<int>(row.size()) != nx) {
                fail(where, "'values' rows must all have the same length");
            }
            for (const auto& v : row) {
                if (!v.is_number()) fail(where, "'values' must hold numbers only");
                flat.push_back(v.get<double>());
            }
        }
        const bool monotone = j.contains("monotone") && j["monotone"].is_boolean()
                                  ? j["monotone"].get<bool>()
                                  : false;
        return DeathField::sampled(std::move(flat), nx, nt, require_number(j, where, "x_max"),
                                   period, monotone);
    }
    fail(where, "mode must be 'affine' or 'sampled'");
}

EvolutionProfile parse_evolution(const json& j, double period) {
    const std::string where = "model.evolution";
    reject_unknown_keys(j, where, {"mode", "sigma", "values"});
    const std::string mode = require_string(j, where, "mode");
    if (mode == "exp-cosine") {
        return EvolutionProfile::exp_cosine(require_number(j, where, "sigma"), period);
    }
    if (mode == "sampled") {
        return EvolutionProfile::sampled(require_number_array(j, where, "values"), period);
    }
    fail(where, "mode must be 'exp-cosine' or 'sampled'");
}

ModelParameters parse_model(const json& j) {
    const std::string where = "model";
    reject_unknown_keys(j, where,
                        {"D", "alpha", "k0", "k1", "growth", "light", "death", "evolution", "L0",
                         "T"});
    ModelParameters p;
    p.period = require_number(j, where, "T");
    p.diffusion = require_number(j, where, "D");
    p.advection = number_or(j, where, "alpha", 0.0);
    p.background_turbidity = require_number(j, where, "k0");
    p.shading = number_or(j, where, "k1", 0.0);
    p.column_depth = require_number(j, where, "L0");

    if (!j.contains("growth") || !j["growth"].is_object()) fail(where, "missing 'growth' table");
    reject_unknown_keys(j["growth"], "model.growth", {"a", "b"});
    p.growth.a = require_number(j["growth"], "model.growth", "a");
    p.growth.b = require_number(j["growth"], "model.growth", "b");

    if (!j.contains("light") || !j["light"].is_object()) fail(where, "missing 'light' table");
    p.light = parse_light(j["light"], p.period);
    if (!j.contains("death") || !j["death"].is_object()) fail(where, "missing 'death' table");
    p.death = parse_death(j["death"], p.period);
    if (!j.contains("evolution") || !j["evolution"].is_object()) {
        fail(where, "missing 'evolution' table");
    }
    p.evolution = parse_evolution(j["evolution"], p.period);
    return p;
}

}  // namespace

ScenarioConfig config_from_preset(const std::string& preset_name) {
    ScenarioConfig config;
    config.model = scenario(preset_name).params;
    return config;
}

ScenarioConfig parse_config_text(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ConfigError("config: empty input");
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown_keys(j, "top level",
                        {"model", "grid", "stepping", "eigen", "initial", "output_dir"});
    if (!j.contains("model") || !j["model"].is_object()) {
        throw ConfigError("config: missing 'model' table");
    }

    ScenarioConfig config;
    config.model = parse_model(j["model"]);

    if (j.contains("grid")) {
        reject_unknown_keys(j["grid"], "grid", {"nodes"});
        config.grid_nodes = integer_or(j["grid"], "grid", "nodes", config.grid_nodes);
    }
    if (j.contains("stepping")) {
        const auto& s = j["stepping"];
        reject_unknown_keys(s, "stepping",
                            {"steps_per_period", "record_stride", "horizon_periods",
                             "extinction_tol", "periodic_residual_tol", "density_floor"});
        config.stepping.steps_per_period =
            integer_or(s, "stepping", "steps_per_period", config.stepping.steps_per_period);
        config.stepping.record_stride =
            integer_or(s, "stepping", "record_stride", config.stepping.record_stride);
        config.stepping.horizon_periods =
            integer_or(s, "stepping", "horizon_periods", config.stepping.horizon_periods);
        config.stepping.thresholds.extinction =
            number_or(s, "stepping", "extinction_tol", config.stepping.thresholds.extinction);
        config.stepping.thresholds.periodic_residual = number_or(
            s, "stepping", "periodic_residual_tol", config.stepping.thresholds.periodic_residual);
        config.stepping.thresholds.density_floor =
            number_or(s, "stepping", "density_floor", config.stepping.thresholds.density_floor);
    }
    if (j.contains("eigen")) {
        const auto& e = j["eigen"];
        reject_unknown_keys(e, "eigen",
                            {"power_tol", "max_power_iterations", "bisection_tol",
                             "max_bisections", "steps_per_period"});
        config.eigen.power_tol = number_or(e, "eigen", "power_tol", config.eigen.power_tol);
        config.eigen.max_power_iterations = integer_or(e, "eigen", "max_power_iterations",
                                                       config.eigen.max_power_iterations);
        config.eigen.bisection_tol =
            number_or(e, "eigen", "bisection_tol", config.eigen.bisection_tol);
        config.eigen.max_bisections =
            integer_or(e, "eigen", "max_bisections", config.eigen.max_bisections);
        config.eigen.steps_per_period =
            integer_or(e, "eigen", "steps_per_period", config.eigen.steps_per_period);
    }
    if (j.contains("initial")) {
        const auto& i = j["initial"];
        reject_unknown_keys(i, "initial", {"mode", "value", "path"});
        const std::string mode = require_string(i, "initial", "mode");
        if (mode == "preset-z0") {
            config.initial.kind = InitialCondition::Kind::preset_z0;
        } else if (mode == "constant") {
            config.initial.kind = InitialCondition::Kind::constant;
            config.initial.value = require_number(i, "initial", "value");
        } else if (mode == "file") {
            config.initial.kind = InitialCondition::Kind::file;
            config.initial.path = require_string(i, "initial", "path");
        } else {
            throw ConfigError("config: initial.mode must be 'preset-z0', 'constant' or 'file'");
        }
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("config: output_dir must be a string");
        config.output_dir = j["output_dir"].get<std::string>();
    }

    const auto report = validate(config.model);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "config: model invariants violated:";
        for (const auto& v : report.violations) msg << "\n  - " << v;
        throw ConfigError(msg.str());
    }
    return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
    json j;
    const ModelParameters& p = config.model;
    json model;
    model["T"] = p.period;
    model["D"] = p.diffusion;
    model["alpha"] = p.advection;
    model["k0"] = p.background_turbidity;
    model["k1"] = p.shading;
    model["L0"] = p.column_depth;
    model["growth"] = {{"a", p.growth.a}, {"b", p.growth.b}};

    if (p.light.is_constant()) {
        model["light"] = {{"mode", "constant"}, {"I0", p.light.samples()[0]}};
    } else {
        model["light"] = {{"mode", "sampled"}, {"values", p.light.samples()}};
    }
    if (p.death.is_affine()) {
        model["death"] = {{"mode", "affine"},
                          {"c0", p.death.affine_offset()},
                          {"c1", p.death.affine_slope()}};
    } else {
        json rows = json::array();
        const int nx = p.death.sample_nx();
        for (int it = 0; it < p.death.sample_nt(); ++it) {
            json row = json::array();
            for (int ix = 0; ix < nx; ++ix) {
                row.push_back(p.death.samples()[static_cast<size_t>(it) * nx + ix]);
            }
            rows.push_back(row);
        }
        model["death"] = {{"mode", "sampled"},
                          {"values", rows},
                          {"x_max", p.death.sampled_x_max()},
                          {"monotone", p.death.sampled_monotone_declared()}};
    }
    if (p.evolution.is_parametric()) {
        model["evolution"] = {{"mode", "exp-cosine"}, {"sigma", p.evolution.sigma()}};
    } else {
        model["evolution"] = {{"mode", "sampled"}, {"values", p.evolution.samples()}};
    }
    j["model"] = model;

    j["grid"] = {{"nodes", config.grid_nodes}};
    j["stepping"] = {{"steps_per_period", config.stepping.steps_per_period},
                     {"record_stride", config.stepping.record_stride},
                     {"horizon_periods", config.stepping.horizon_periods},
                     {"extinction_tol", config.stepping.thresholds.extinction},
                     {"periodic_residual_tol", config.stepping.thresholds.periodic_residual},
                     {"density_floor", config.stepping.thresholds.density_floor}};
    j["eigen"] = {{"power_tol", config.eigen.power_tol},
                  {"max_power_iterations", config.eigen.max_power_iterations},
                  {"bisection_tol", config.eigen.bisection_tol},
                  {"max_bisections", config.eigen.max_bisections},
                  {"steps_per_period", config.eigen.steps_per_period}};
    switch (config.initial.kind) {
        case InitialCondition::Kind::preset_z0:
            j["initial"] = {{"mode", "preset-z0"}};
            break;
        case InitialCondition::Kind::constant:
            j["initial"] = {{"mode", "constant"}, {"value", config.initial.value}};
            break;
        case InitialCondition::Kind::file:
            j["initial"] = {{"mode", "file"}, {"path", config.initial.path}};
            break;
    }
    j["output_dir"] = config.output_dir;
    return j.dump(2) + "\n";
}

}  // namespace plankton
