#include "plankton/discretize.hpp"

#include <cmath>
#include <stdexcept>

namespace plankton {

namespace detail {

double form_exponent_scale(const ModelParameters& params, double t) {
    return params.advection / params.diffusion * params.evolution.at(t).rho;
}

void assemble_transport_into(const ModelParameters& params, const Grid& grid, double t,
                             TridiagonalOperator& out) {
    const int n = grid.n;
    if (out.size() != n) out.resize(n);

    const double rho = params.evolution.at(t).rho;
    const double h = grid.spacing;
    const double coeff = params.diffusion / (rho * rho * h * h);
    const double theta = params.advection / params.diffusion * rho;
    const double up = std::exp(theta * h / 2.0);    // face weight above a node
    const double down = 1.0 / up;                   // face weight below

    out.sub[0] = 0.0;
    out.diag[0] = -2.0 * coeff * up;
    out.super[0] = 2.0 * coeff * up;
    for (int i = 1; i < n - 1; ++i) {
        out.sub[i] = coeff * down;
        out.diag[i] = -coeff * (up + down);
        out.super[i] = coeff * up;
    }
    out.sub[n - 1] = 2.0 * coeff * down;
    out.diag[n - 1] = -2.0 * coeff * down;
    out.super[n - 1] = 0.0;

    out.max_cell_peclet = std::abs(theta) * h / 2.0;
    out.peclet_warning = out.max_cell_peclet >= 1.0;
}

void reaction_eigen_into(const ModelParameters& params, const Grid& grid, double t, double mu,
                         std::span<double> out) {
    if (!(mu > 0.0)) {
        throw std::domain_error("reaction coefficients: eigen weight mu must be positive");
    }
    const auto rate = params.evolution.at(t);
    const double drift = rate.rho_dot / rate.rho;
    const double settle = params.advection * rate.rho_dot / params.diffusion;
    const double surface_light = params.light(t);
    const double k0rho = params.background_turbidity * rate.rho;
    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.node(i);
        const double light = surface_light * std::exp(-k0rho * y);
        out[i] = params.growth.rate(light) / mu - params.death.at_depth(rate.rho * y, t) -
                 drift - settle * y;
    }
}

void reaction_nonlinear_into(const ModelParameters& params, const Grid& grid, double t,
                             std::span<const double> z_values, std::span<double> cum_scratch,
                             std::span<double> out) {
    const auto rate = params.evolution.at(t);
    const double drift = rate.rho_dot / rate.rho;
    const double settle = params.advection * rate.rho_dot / params.diffusion;
    const double surface_light = params.light(t);
    const double k0rho = params.background_turbidity * rate.rho;
    const double k1rho = params.shading * rate.rho;
    const double theta = params.advection / params.diffusion * rate.rho;
    const double h = grid.spacing;

    // Trapezoid cumulative integral of v = e^{theta y} z, accumulated on the fly.
    double cum = 0.0;
    double v_prev = z_values[0];  // e^{theta * 0} = 1
    cum_scratch[0] = 0.0;
    for (int i = 1; i < grid.n; ++i) {
        const double v_i = std::exp(theta * grid.node(i)) * z_values[i];
        cum += h * (v_prev + v_i) / 2.0;
        cum_scratch[i] = cum;
        v_prev = v_i;
    }

    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.node(i);
        const double light = surface_light * std::exp(-k0rho * y - k1rho * cum_scratch[i]);
        out[i] = params.growth.rate(light) - params.death.at_depth(rate.rho * y, t) - drift -
                 settle * y;
    }
}

}  // namespace detail

TridiagonalOperator assemble_transport(const ModelParameters& params, const Grid& grid, double t) {
    TridiagonalOperator op;
    detail::assemble_transport_into(params, grid, t, op);
    return op;
}

std::vector<double> reaction_coefficients(const ModelParameters& params, const Grid& grid,
                                          double t, const StateProfile& state) {
    if (state.size() != grid.n) {
        throw ConfigError("reaction coefficients: state size does not match grid");
    }
    std::vector<double> out(static_cast<size_t>(grid.n));
    std::vector<double> cum(static_cast<size_t>(grid.n));
    if (state.form == ProfileForm::z) {
        detail::reaction_nonlinear_into(params, grid, t, state.values, cum, out);
    } else {
        StateProfile z = to_z_form(state, params, grid, t);
        detail::reaction_nonlinear_into(params, grid, t, z.values, cum, out);
    }
    return out;
}

std::vector<double> reaction_coefficients(const ModelParameters& params, const Grid& grid,
                                          double t, double mu) {
    std::vector<double> out(static_cast<size_t>(grid.n));
    detail::reaction_eigen_into(params, grid, t, mu, out);
    return out;
}

std::vector<double> cumulative_integral(const StateProfile& profile, const Grid& grid) {
    if (profile.form != ProfileForm::v) {
        throw ConfigError("cumulative integral expects a v-form profile");
    }
    if (profile.size() != grid.n) {
        throw ConfigError("cumulative integral: profile size does not match grid");
    }
    std::vector<double> out(static_cast<size_t>(grid.n));
    out[0] = 0.0;
    const double h = grid.spacing;
    for (int i = 1; i < grid.n; ++i) {
        out[i] = out[i - 1] + h * (profile.values[i - 1] + profile.values[i]) / 2.0;
    }
    return out;
}

double total_mass(const StateProfile& profile, const Grid& grid, double t,
                  const ModelParameters& params) {
    const StateProfile v =
        profile.form == ProfileForm::v ? profile : to_v_form(profile, params, grid, t);
    const double h = grid.spacing;
    double integral = 0.5 * (v.values.front() + v.values.back());
    for (int i = 1; i < grid.n - 1; ++i) integral += v.values[i];
    integral *= h;
    return params.evolution.at(t).rho * integral;
}

namespace {

StateProfile scale_by_exponent(const StateProfile& profile, const ModelParameters& params,
                               const Grid& grid, double t, double sign, ProfileForm target) {
    const double theta = detail::form_exponent_scale(params, t);
    if (std::abs(theta) * grid.depth > 700.0) {
        throw ConfigError("form change: |alpha/D| rho L0 > 700 overflows the exponent; "
                          "solve in v-form instead");
    }
    StateProfile out = profile;
    out.form = target;
    if (theta != 0.0) {
        for (int i = 0; i < grid.n; ++i) {
            out.values[i] = profile.values[i] * std::exp(sign * theta * grid.node(i));
        }
    }
    return out;
}

}  // namespace

StateProfile to_v_form(const StateProfile& profile, const ModelParameters& params,
                       const Grid& grid, double t) {
    if (profile.form == ProfileForm::v) return profile;
    return scale_by_exponent(profile, params, grid, t, +1.0, ProfileForm::v);
}

StateProfile to_z_form(const StateProfile& profile, const ModelParameters& params,
                       const Grid& grid, double t) {
    if (profile.form == ProfileForm::z) return profile;
    return scale_by_exponent(profile, params, grid, t, -1.0, ProfileForm::z);
}

}  // namespace plankton
