#include "plankton/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plankton {

std::string to_string(Dynamics kind) {
    switch (kind) {
        case Dynamics::extinct: return "extinct";
        case Dynamics::persistent: return "persistent";
        case Dynamics::undetermined: return "undetermined";
    }
    return "undetermined";
}

StrangKernel::StrangKernel(const ModelParameters& params, const Grid& grid)
    : params_(&params), grid_(grid) {
    const size_t n = static_cast<size_t>(grid.n);
    coeff_.resize(n);
    cum_.resize(n);
    exp_pre_.resize(n);
    exp_post_.resize(n);
    plus_sub_.resize(n);
    plus_diag_.resize(n);
    plus_super_.resize(n);
    minus_sub_.resize(n);
    minus_diag_.resize(n);
    minus_super_.resize(n);
    tmp_.resize(n);
}

void StrangKernel::build_transport(double t_mid, double dt, bool transposed) {
    detail::assemble_transport_into(*params_, grid_, t_mid, transport_);
    const int n = grid_.n;
    const double half = dt / 2.0;
    // Transposing a tridiagonal matrix swaps the off-diagonals with a one-row
    // shift: (A^T).sub[i] = A.super[i-1], (A^T).super[i] = A.sub[i+1].
    for (int i = 0; i < n; ++i) {
        const double s = (i > 0) ? (transposed ? transport_.super[i - 1] : transport_.sub[i]) : 0.0;
        const double u =
            (i < n - 1) ? (transposed ? transport_.sub[i + 1] : transport_.super[i]) : 0.0;
        plus_sub_[i] = half * s;
        plus_diag_[i] = 1.0 + half * transport_.diag[i];
        plus_super_[i] = half * u;
        minus_sub_[i] = -half * s;
        minus_diag_[i] = 1.0 - half * transport_.diag[i];
        minus_super_[i] = -half * u;
    }
    minus_factor_.factor(minus_sub_, minus_diag_, minus_super_);
}

void StrangKernel::advance(std::vector<double>& z, double t, double dt) {
    const int n = grid_.n;
    // Leading half-step freezes the coefficients at the entering state.
    detail::reaction_nonlinear_into(*params_, grid_, t, z, cum_, coeff_);
    for (int i = 0; i < n; ++i) z[i] *= std::exp(coeff_[i] * dt / 2.0);

    build_transport(t + dt / 2.0, dt, false);
    tmp_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = plus_diag_[i] * z[i];
        if (i > 0) s += plus_sub_[i] * z[i - 1];
        if (i < n - 1) s += plus_super_[i] * z[i + 1];
        tmp_[i] = s;
    }
    minus_factor_.solve(tmp_);
    z.swap(tmp_);

    // Trailing half-step freezes the coefficients at its own output, which
    // keeps the step time-symmetric when the light term depends on the state.
    // One fixed-point refresh of the cumulative integral is enough to hold
    // second order; without self-shading the refresh is a no-op and skipped.
    detail::reaction_nonlinear_into(*params_, grid_, t + dt, z, cum_, coeff_);
    if (params_->shading != 0.0) {
        exp_pre_.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) exp_pre_[i] = z[i] * std::exp(coeff_[i] * dt / 2.0);
        detail::reaction_nonlinear_into(*params_, grid_, t + dt, exp_pre_, cum_, coeff_);
    }
    for (int i = 0; i < n; ++i) z[i] *= std::exp(coeff_[i] * dt / 2.0);
}

void StrangKernel::advance_linear(std::span<double> columns, int ncols, double t, double dt,
                                  double mu) {
    const int n = grid_.n;
    detail::reaction_eigen_into(*params_, grid_, t, mu, coeff_);
    for (int i = 0; i < n; ++i) exp_pre_[i] = std::exp(coeff_[i] * dt / 2.0);
    detail::reaction_eigen_into(*params_, grid_, t + dt, mu, coeff_);
    for (int i = 0; i < n; ++i) exp_post_[i] = std::exp(coeff_[i] * dt / 2.0);
    build_transport(t + dt / 2.0, dt, false);

    for (int c = 0; c < ncols; ++c) {
        double* col = columns.data() + static_cast<size_t>(c) * n;
        for (int i = 0; i < n; ++i) col[i] *= exp_pre_[i];
        tmp_[0] = plus_diag_[0] * col[0] + plus_super_[0] * col[1];
        for (int i = 1; i < n - 1; ++i) {
            tmp_[i] = plus_sub_[i] * col[i - 1] + plus_diag_[i] * col[i] +
                      plus_super_[i] * col[i + 1];
        }
        tmp_[n - 1] = plus_sub_[n - 1] * col[n - 2] + plus_diag_[n - 1] * col[n - 1];
        minus_factor_.solve(tmp_);
        for (int i = 0; i < n; ++i) col[i] = tmp_[i] * exp_post_[i];
    }
}

void StrangKernel::advance_linear_adjoint(std::span<double> columns, int ncols, double t,
                                          double dt, double mu) {
    const int n = grid_.n;
    detail::reaction_eigen_into(*params_, grid_, t, mu, coeff_);
    for (int i = 0; i < n; ++i) exp_pre_[i] = std::exp(coeff_[i] * dt / 2.0);
    detail::reaction_eigen_into(*params_, grid_, t + dt, mu, coeff_);
    for (int i = 0; i < n; ++i) exp_post_[i] = std::exp(coeff_[i] * dt / 2.0);
    build_transport(t + dt / 2.0, dt, true);

    // (E2 C E1)^T = E1 C^T E2 with C^T = (I + aA^T)(I - aA^T)^{-1}.
    for (int c = 0; c < ncols; ++c) {
        double* col = columns.data() + static_cast<size_t>(c) * n;
        for (int i = 0; i < n; ++i) tmp_[i] = col[i] * exp_post_[i];
        minus_factor_.solve(tmp_);
        col[0] = (plus_diag_[0] * tmp_[0] + plus_super_[0] * tmp_[1]) * exp_pre_[0];
        for (int i = 1; i < n - 1; ++i) {
            col[i] = (plus_sub_[i] * tmp_[i - 1] + plus_diag_[i] * tmp_[i] +
                      plus_super_[i] * tmp_[i + 1]) *
                     exp_pre_[i];
        }
        col[n - 1] =
            (plus_sub_[n - 1] * tmp_[n - 2] + plus_diag_[n - 1] * tmp_[n - 1]) * exp_pre_[n - 1];
    }
}

StateProfile step(const StateProfile& state, double t, double dt, const ModelParameters& params,
                  const Grid& grid) {
    if (state.form != ProfileForm::z) {
        throw ConfigError("step expects the state in z-form");
    }
    if (!(dt > 0.0)) {
        throw ConfigError("step needs dt > 0");
    }
    StateProfile out = state;
    StrangKernel kernel(params, grid);
    kernel.advance(out.values, t, dt);
    return out;
}

Trajectory simulate(const ModelParameters& params, const StateProfile& initial, const Grid& grid,
                    const SteppingConfig& config) {
    if (config.steps_per_period < 100) {
        throw ConfigError("stepping config needs at least 100 steps per period");
    }
    if (config.record_stride < 1 || config.horizon_periods < 1) {
        throw ConfigError("stepping config: record stride and horizon must be positive");
    }
    StateProfile z = initial.form == ProfileForm::z
                         ? initial
                         : to_z_form(initial, params, grid, 0.0);
    if (z.size() != grid.n) {
        throw ConfigError("simulate: initial profile size does not match grid");
    }
    bool any_positive = false;
    for (double x : z.values) {
        if (x < 0.0) throw ConfigError("simulate: initial profile must be nonnegative");
        if (x > 0.0) any_positive = true;
    }
    if (!any_positive) throw ConfigError("simulate: initial profile must not vanish identically");

    const double T = params.period;
    const double dt = config.dt(T);
    const double initial_sup = sup_norm(z.values);

    Trajectory traj;
    traj.grid = grid;
    traj.period = T;

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(z);
        traj.diagnostics.push_back({t, total_mass(z, grid, t, params), sup_norm(z.values),
                                    min_value(z.values)});
    };
    record(0.0);

    StrangKernel kernel(params, grid);
    std::vector<double> previous_period = z.values;
    bool stop = false;
    for (int period_index = 0; period_index < config.horizon_periods && !stop; ++period_index) {
        for (int k = 0; k < config.steps_per_period; ++k) {
            const long global = static_cast<long>(period_index) * config.steps_per_period + k;
            const double t = T * (static_cast<double>(global) / config.steps_per_period);
            kernel.advance(z.values, t, dt);
            if ((global + 1) % config.record_stride == 0) {
                record(T * (static_cast<double>(global + 1) / config.steps_per_period));
            }
        }
        const double t_end = T * (period_index + 1);
        if (traj.times.back() != t_end) record(t_end);

        const double sup = sup_norm(z.values);
        if (!std::isfinite(sup)) {
            throw NumericalError("simulate: state became non-finite during period " +
                                 std::to_string(period_index + 1) + "; last good t = " +
                                 std::to_string(T * period_index));
        }
        double diff = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            diff = std::max(diff, std::abs(z.values[i] - previous_period[i]));
        }
        traj.period_residuals.push_back(diff / std::max(sup, 1e-12));
        previous_period = z.values;

        if (sup < config.thresholds.extinction * initial_sup) {
            traj.stopped_early = true;
            stop = true;
        }
    }
    return traj;
}

DynamicsVerdict classify(const Trajectory& trajectory, const VerdictThresholds& thresholds) {
    if (trajectory.diagnostics.empty()) {
        throw ConfigError("classify: empty trajectory");
    }
    DynamicsVerdict verdict;
    const double T = trajectory.period;
    const double initial_sup = trajectory.diagnostics.front().sup;
    const double final_sup = trajectory.diagnostics.back().sup;

    // Decay factor across the last completed period, for the evidence fields.
    const double t_last = trajectory.times.back();
    double sup_period_ago = initial_sup;
    for (const auto& d : trajectory.diagnostics) {
        if (d.t <= t_last - T) sup_period_ago = d.sup;
    }
    verdict.decay_factor_per_period =
        sup_period_ago > 0.0 ? final_sup / sup_period_ago : 0.0;
    verdict.period_residual = trajectory.period_residuals.empty()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : trajectory.period_residuals.back();

    if (initial_sup == 0.0 || final_sup < thresholds.extinction * initial_sup) {
        verdict.kind = Dynamics::extinct;
        return verdict;
    }

    if (trajectory.span() < 3.0 * T - 1e-9 * T) {
        throw ConfigError("classify: trajectory must span at least 3 full periods");
    }

    double min_last = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < trajectory.diagnostics.size(); ++i) {
        if (trajectory.diagnostics[i].t >= t_last - T - 1e-12 * T) {
            min_last = std::min(min_last, trajectory.diagnostics[i].min);
        }
    }
    verdict.min_last_period = min_last;

    if (!trajectory.period_residuals.empty() &&
        trajectory.period_residuals.back() < thresholds.periodic_residual &&
        min_last > thresholds.density_floor) {
        verdict.kind = Dynamics::persistent;
        for (size_t i = 0; i < trajectory.times.size(); ++i) {
            if (trajectory.times[i] >= t_last - T - 1e-12 * T) {
                verdict.cycle_times.push_back(trajectory.times[i]);
                verdict.cycle.push_back(trajectory.snapshots[i]);
            }
        }
        return verdict;
    }

    verdict.kind = Dynamics::undetermined;
    return verdict;
}

double decay_rate_estimate(const Trajectory& trajectory) {
    const double T = trajectory.period;
    if (trajectory.span() < 5.0 * T - 1e-9 * T) {
        throw ConfigError("decay rate estimate needs a trajectory spanning at least 5 periods");
    }
    const double t_mid = trajectory.times.front() + trajectory.span() / 2.0;

    double first_sup = -1.0;
    double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
    size_t count = 0;
    for (const auto& d : trajectory.diagnostics) {
        if (d.t < t_mid) continue;
        if (!(d.sup > 0.0)) {
            throw NumericalError("decay rate estimate: nonpositive sup-norm in fit window");
        }
        if (first_sup < 0.0) first_sup = d.sup;
        const double y = std::log(d.sup);
        sum_t += d.t;
        sum_y += y;
        sum_tt += d.t * d.t;
        sum_ty += d.t * y;
        ++count;
    }
    if (count < 3) {
        throw ConfigError("decay rate estimate: too few samples in the fit window");
    }
    const double last_sup = trajectory.diagnostics.back().sup;
    if (last_sup > 0.9 * first_sup) {
        throw ConfigError("decay rate undefined: trajectory has not decayed across the fit window");
    }
    const double denom = static_cast<double>(count) * sum_tt - sum_t * sum_t;
    return (static_cast<double>(count) * sum_ty - sum_t * sum_y) / denom;
}

}  // namespace plankton
