#pragma once

#include <span>
#include <string>
#include <vector>

#include "plankton/discretize.hpp"
#include "plankton/grid.hpp"
#include "plankton/model.hpp"
#include "plankton/tridiagonal.hpp"

namespace plankton {

/// Verdict thresholds: extinction is relative to the initial sup-norm; the
/// persistence test combines the per-period residual with a density floor.
struct VerdictThresholds {
    double extinction = 1e-4;        // sup-norm < extinction * initial sup-norm
    double periodic_residual = 1e-4; // ||z(kT) - z((k-1)T)|| / ||z(kT)|| below this
    double density_floor = 1e-4;     // min over the final period above this
};

struct SteppingConfig {
    int steps_per_period = 2000;  // dt = T / steps_per_period, at least 100
    int record_stride = 200;      // snapshot every this many steps
    int horizon_periods = 200;
    VerdictThresholds thresholds;

    double dt(double period) const { return period / steps_per_period; }
};

struct TrajectorySample {
    double t;
    double mass;      // physical-coordinate total population
    double sup;       // sup-norm of the z-form state
    double min;       // minimum nodal value
};

struct Trajectory {
    Grid grid;
    double period = 0.0;
    std::vector<double> times;
    std::vector<StateProfile> snapshots;        // z-form
    std::vector<TrajectorySample> diagnostics;  // aligned with times
    std::vector<double> period_residuals;       // r_k, k = 1.. completed periods
    bool stopped_early = false;

    double span() const { return times.empty() ? 0.0 : times.back() - times.front(); }
};

enum class Dynamics { extinct, persistent, undetermined };

struct DynamicsVerdict {
    Dynamics kind = Dynamics::undetermined;
    double decay_factor_per_period = 0.0;  // last sup(kT)/sup((k-1)T)
    double period_residual = 0.0;          // last r_k
    double min_last_period = 0.0;
    // Persistent only: the limit cycle sampled over the final period.
    std::vector<double> cycle_times;
    std::vector<StateProfile> cycle;
};

std::string to_string(Dynamics kind);

/// One Strang step of the z-form system over [t, t + dt]:
/// reaction half-step (coefficients from the state at t), Crank-Nicolson
/// transport with the operator frozen at t + dt/2, reaction half-step
/// (coefficients from the advanced state at t + dt). Reaction substeps are
/// exact diagonal exponentials; the nonlocal light integral is refreshed at
/// each substep.
class StrangKernel {
public:
    StrangKernel(const ModelParameters& params, const Grid& grid);

    /// Nonlinear system, in place on z-form nodal values.
    void advance(std::vector<double>& z, double t, double dt);

    /// mu-weighted linearization applied to ncols column-major profiles of
    /// length grid.n stored contiguously in `columns`.
    void advance_linear(std::span<double> columns, int ncols, double t, double dt, double mu);

    /// Transposed step of the linearization (adjoint composition runs these in
    /// reverse time order).
    void advance_linear_adjoint(std::span<double> columns, int ncols, double t, double dt,
                                double mu);

    const Grid& grid() const { return grid_; }

private:
    void build_transport(double t_mid, double dt, bool transposed);

    const ModelParameters* params_;
    Grid grid_;
    TridiagonalOperator transport_;
    std::vector<double> coeff_, cum_, exp_pre_, exp_post_;
    std::vector<double> plus_sub_, plus_diag_, plus_super_;     // I + (dt/2) A
    std::vector<double> minus_sub_, minus_diag_, minus_super_;  // I - (dt/2) A
    TridiagonalFactor minus_factor_;
    std::vector<double> tmp_;
};

/// Single step as a value-level operation. `state` must be in z-form.
StateProfile step(const StateProfile& state, double t, double dt, const ModelParameters& params,
                  const Grid& grid);

/// Integrates from the given initial profile over horizon_periods * T,
/// recording diagnostics and per-period residuals. Stops early once the
/// extinction threshold is crossed. Initial data must be nonnegative and not
/// identically zero.
Trajectory simulate(const ModelParameters& params, const StateProfile& initial, const Grid& grid,
                    const SteppingConfig& config);

/// Applies the threshold rules to a recorded trajectory. Needs at least 3 full
/// periods unless the trajectory already meets the extinction criterion.
DynamicsVerdict classify(const Trajectory& trajectory, const VerdictThresholds& thresholds);

/// Least-squares slope of ln(sup-norm) against t over the last half of the
/// trajectory. Requires a decaying trajectory spanning at least 5 periods;
/// throws ConfigError when the window has not decayed by at least 10%.
double decay_rate_estimate(const Trajectory& trajectory);

}  // namespace plankton
