#pragma once

#include <span>
#include <vector>

#include "plankton/grid.hpp"
#include "plankton/model.hpp"
#include "plankton/tridiagonal.hpp"

namespace plankton {

/// Spatial discretization of the transformed transport operator
///   (D / rho^2(t)) e^{-theta y} d/dy ( e^{theta y} dz/dy ),
///   theta = (alpha / D) rho(t),
/// which expands to (D/rho^2) z_yy + (alpha/rho) z_y.  Exponentially fitted
/// face fluxes with half-cell closures at the no-flux boundaries: the discrete
/// operator annihilates constants row-wise and telescopes exactly against the
/// trapezoid mass functional, so zero-reaction runs conserve mass to roundoff.
/// Zero reaction diagonal; cell Peclet diagnostics are attached to the result.
TridiagonalOperator assemble_transport(const ModelParameters& params, const Grid& grid, double t);

/// Reaction coefficients of the full nonlinear system at time t:
///   g(I(rho y_i, t)) - d(rho y_i, t) - rho_dot/rho - alpha y_i rho_dot / D
/// with the light intensity computed from the state's cumulative integral
/// (self-shading). Accepts the state in either form.
std::vector<double> reaction_coefficients(const ModelParameters& params, const Grid& grid,
                                          double t, const StateProfile& state);

/// Reaction coefficients of the mu-weighted linearization at zero:
///   g(I0(t) e^{-k0 rho y_i}) / mu - d(rho y_i, t) - rho_dot/rho - alpha y_i rho_dot / D.
/// No self-shading term. Throws std::domain_error for mu <= 0.
std::vector<double> reaction_coefficients(const ModelParameters& params, const Grid& grid,
                                          double t, double mu);

/// Composite-trapezoid cumulative sums of a v-form profile:
/// out_0 = 0, out_i = out_{i-1} + h (v_{i-1} + v_i) / 2.
std::vector<double> cumulative_integral(const StateProfile& profile, const Grid& grid);

/// Total population in physical coordinates: rho(t) * trapezoid integral of v.
double total_mass(const StateProfile& profile, const Grid& grid, double t,
                  const ModelParameters& params);

/// Pointwise change of representation v = e^{(alpha/D) rho(t) y} z.
/// Throws ConfigError when |alpha/D| rho(t) L0 > 700 (exponent overflow; solve
/// in v-form instead).
StateProfile to_v_form(const StateProfile& profile, const ModelParameters& params,
                       const Grid& grid, double t);
StateProfile to_z_form(const StateProfile& profile, const ModelParameters& params,
                       const Grid& grid, double t);

namespace detail {

// Buffer-reusing variants for the stepping kernel.
void assemble_transport_into(const ModelParameters& params, const Grid& grid, double t,
                             TridiagonalOperator& out);
void reaction_eigen_into(const ModelParameters& params, const Grid& grid, double t, double mu,
                         std::span<double> out);
void reaction_nonlinear_into(const ModelParameters& params, const Grid& grid, double t,
                             std::span<const double> z_values, std::span<double> cum_scratch,
                             std::span<double> out);
double form_exponent_scale(const ModelParameters& params, double t);  // (alpha/D) rho(t)

}  // namespace detail

}  // namespace plankton
