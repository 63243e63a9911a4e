#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plankton/grid.hpp"
#include "plankton/model.hpp"
#include "plankton/timestep.hpp"

namespace plankton {

struct EigenSolveConfig {
    double power_tol = 1e-10;      // relative change of the multiplier estimate
    int max_power_iterations = 500;  // period-map applications per multiplier solve
    double bisection_tol = 1e-6;   // relative bracket width on mu
    int max_bisections = 80;
    int steps_per_period = 512;    // temporal resolution of the linear period flow
};

/// A ratio of two integrals, kept unseparated so callers can check the pieces.
struct IntegralRatio {
    double numerator = 0.0;
    double denominator = 0.0;
    double value() const { return numerator / denominator; }
};

/// Closed-form no-advection bounds: lower (bottom-evaluated coefficients) and
/// upper (surface-evaluated coefficients) enclose the reproduction number.
struct ClosedFormBounds {
    IntegralRatio lower;  // R2
    IntegralRatio upper;  // R1
};

struct MultiplierResult {
    double multiplier = 0.0;
    std::vector<double> eigenprofile;  // z-form nodal values, sup-norm 1
    int iterations = 0;
};

struct R0Report {
    double r0 = 0.0;
    double lambda0 = 0.0;               // principal growth exponent, -ln r(1) / T
    double multiplier_residual = 0.0;   // |r(r0) - 1|
    std::optional<ClosedFormBounds> bounds;  // alpha == 0 only
    IntegralRatio lower_bound;          // general advection-penalized lower bound
    IntegralRatio r0_star;              // vanishing-transport limit
    std::vector<double> eigenprofile;   // principal profile at t = 0, sup-norm 1
    int power_iterations = 0;           // total over all multiplier solves
    int bisections = 0;
};

/// Advances a z-form profile through one period T of the mu-weighted
/// linearization with the same Strang/Crank-Nicolson machinery as the
/// nonlinear stepper. Linear in the input profile.
StateProfile period_map_apply(const StateProfile& profile, double mu,
                              const ModelParameters& params, const Grid& grid,
                              const EigenSolveConfig& config);

/// Principal Floquet multiplier of the one-period linear flow: power iteration
/// with sup-norm normalization from a strictly positive start (all ones, or
/// `warm_start` when given), Rayleigh-ratio estimate. Throws NumericalError on
/// non-convergence within max_power_iterations, reporting the last ratio and an
/// oscillation diagnostic.
MultiplierResult principal_multiplier(double mu, const ModelParameters& params, const Grid& grid,
                                      const EigenSolveConfig& config,
                                      const std::vector<double>* warm_start = nullptr);

/// The basic reproduction number: the weight mu0 at which the principal
/// multiplier equals 1, found by bisection on the strictly decreasing r(mu).
/// Fills the report with lambda0, the closed forms, and iteration counts.
R0Report compute_r0(const ModelParameters& params, const Grid& grid,
                    const EigenSolveConfig& config);

/// Principal growth exponent of the unweighted linearization: -ln(r(1)) / T.
/// Positive values mean decay.
double compute_lambda0(const ModelParameters& params, const Grid& grid,
                       const EigenSolveConfig& config);

/// Vanishing-transport limit of the reproduction number: space-time integral of
/// the linearized growth over the space-time integral of the death rate.
/// Product-trapezoid quadrature with a Richardson refinement check targeting
/// 1e-6 relative error.
IntegralRatio r0_star(const ModelParameters& params, int time_samples = 2048,
                      int depth_samples = 513);

/// General lower bound: same numerator as r0_star over the death integral
/// penalized by alpha^2 / (4 D).
IntegralRatio r0_lower_bound_general(const ModelParameters& params, int time_samples = 2048,
                                     int depth_samples = 513);

/// Closed-form bounds for alpha = 0 (throws ConfigError otherwise):
///   lower: growth at the bottom light level over death at the bottom,
///   upper: growth at the surface light level over death at the surface,
/// single-variable trapezoid quadrature at 1e-8 relative target.
ClosedFormBounds r0_bounds_no_advection(const ModelParameters& params);

struct MonotonicityCheck {
    bool decreasing = false;
    double max_violation = 0.0;  // largest positive forward difference found
};

/// Checks that the principal eigenprofile decreases in depth (alpha = 0 only;
/// throws ConfigError otherwise). Differences up to +1e-10 * sup-norm pass.
MonotonicityCheck eigenprofile_monotonicity_check(const R0Report& report,
                                                  const ModelParameters& params);

enum class SweepParameter { column_depth, diffusion, sigma, advection };

std::string to_string(SweepParameter parameter);

struct SweepRow {
    double value = 0.0;
    double r0 = 0.0;
    double lambda0 = 0.0;
    double residual = 0.0;
    std::string status;  // "ok" or the error message
};

/// One R0 solve per parameter value; rows are independent and run concurrently,
/// results merged back in input order. Per-row failures are recorded in the
/// status column and do not abort the sweep.
std::vector<SweepRow> sweep_r0(const ModelParameters& params, SweepParameter parameter,
                               const std::vector<double>& values, const Grid& grid,
                               const EigenSolveConfig& config);

/// Relative difference between the principal multipliers of the forward period
/// map and its adjoint (reverse-time composition of transposed steps). The two
/// spectra coincide, so the residual measures solver consistency.
double adjoint_consistency_check(const ModelParameters& params, const Grid& grid,
                                 const EigenSolveConfig& config);

namespace detail {

/// Dense one-period propagation matrix of the mu-weighted linear flow,
/// column-major; column j is the period map applied to the j-th basis vector.
struct MonodromyMatrix {
    int n = 0;
    std::vector<double> columns;

    void apply(const double* x, double* y) const;
    void apply_transpose(const double* x, double* y) const;
};

MonodromyMatrix build_monodromy(const ModelParameters& params, const Grid& grid,
                                const EigenSolveConfig& config, double mu, bool adjoint);

}  // namespace detail

}  // namespace plankton
