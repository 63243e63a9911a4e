#include "plankton/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace plankton {

namespace detail {

void MonodromyMatrix::apply(const double* x, double* y) const {
    for (int i = 0; i < n; ++i) y[i] = 0.0;
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const double* col = columns.data() + static_cast<size_t>(j) * n;
        for (int i = 0; i < n; ++i) y[i] += col[i] * xj;
    }
}

void MonodromyMatrix::apply_transpose(const double* x, double* y) const {
    for (int j = 0; j < n; ++j) {
        const double* col = columns.data() + static_cast<size_t>(j) * n;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += col[i] * x[i];
        y[j] = s;
    }
}

MonodromyMatrix build_monodromy(const ModelParameters& params, const Grid& grid,
                                const EigenSolveConfig& config, double mu, bool adjoint) {
    const int n = grid.n;
    MonodromyMatrix m;
    m.n = n;
    m.columns.assign(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) m.columns[static_cast<size_t>(j) * n + j] = 1.0;

    StrangKernel kernel(params, grid);
    const int steps = config.steps_per_period;
    const double T = params.period;
    const double dt = T / steps;
    if (!adjoint) {
        for (int k = 0; k < steps; ++k) {
            kernel.advance_linear(m.columns, n, T * (static_cast<double>(k) / steps), dt, mu);
        }
    } else {
        for (int k = steps - 1; k >= 0; --k) {
            kernel.advance_linear_adjoint(m.columns, n, T * (static_cast<double>(k) / steps), dt,
                                          mu);
        }
    }
    return m;
}

namespace {

struct PowerOutcome {
    double multiplier;
    std::vector<double> profile;
    int iterations;
};

// Power iteration with sup-norm normalization. The multiplier estimate is the
// two-sided Rayleigh ratio w.P v / w.v, with w iterated under the transpose;
// its error contracts at the square of the spectral gap, which matters here
// because small diffusion makes the gap per period tiny.
PowerOutcome power_iterate(const MonodromyMatrix& map, const EigenSolveConfig& config,
                           const std::vector<double>* warm_start) {
    const int n = map.n;
    std::vector<double> v(static_cast<size_t>(n), 1.0);
    if (warm_start && static_cast<int>(warm_start->size()) == n) {
        const double s = sup_norm(*warm_start);
        if (s > 0.0) {
            for (int i = 0; i < n; ++i) v[i] = std::abs((*warm_start)[i]) / s;
        }
    }
    std::vector<double> w(static_cast<size_t>(n), 1.0);
    std::vector<double> pv(static_cast<size_t>(n)), ptw(static_cast<size_t>(n));

    double ratio = 0.0, ratio_prev = 0.0, ratio_prev2 = 0.0;
    for (int iter = 1; iter <= config.max_power_iterations; ++iter) {
        map.apply(v.data(), pv.data());
        map.apply_transpose(w.data(), ptw.data());

        double wpv = 0.0, wv = 0.0;
        for (int i = 0; i < n; ++i) {
            wpv += w[i] * pv[i];
            wv += w[i] * v[i];
        }
        ratio_prev2 = ratio_prev;
        ratio_prev = ratio;
        ratio = wpv / wv;
        if (!std::isfinite(ratio) || ratio <= 0.0) {
            throw NumericalError("power iteration: multiplier estimate left (0, inf): " +
                                 std::to_string(ratio));
        }

        const double sv = sup_norm(pv);
        const double sw = sup_norm(ptw);
        if (sv == 0.0 || sw == 0.0) {
            throw NumericalError("power iteration: iterate collapsed to zero");
        }
        for (int i = 0; i < n; ++i) {
            v[i] = pv[i] / sv;
            w[i] = ptw[i] / sw;
        }

        if (iter >= 3 && std::abs(ratio - ratio_prev) <= config.power_tol * std::abs(ratio)) {
            // Orient the profile so its largest entry is positive.
            double extreme = 0.0;
            for (double x : v) {
                if (std::abs(x) > std::abs(extreme)) extreme = x;
            }
            if (extreme < 0.0) {
                for (double& x : v) x = -x;
            }
            return {ratio, std::move(v), iter};
        }
    }
    std::ostringstream msg;
    msg << "power iteration did not converge in " << config.max_power_iterations
        << " periods; last ratio " << ratio << ", change " << std::abs(ratio - ratio_prev)
        << ", previous change " << std::abs(ratio_prev - ratio_prev2)
        << (std::abs(ratio - ratio_prev2) < std::abs(ratio - ratio_prev)
                ? " (two-cycle oscillation suspected)"
                : "");
    throw NumericalError(msg.str());
}

// ---- quadratures ------------------------------------------------------------

template <typename F>
double trapezoid_time(F&& f, double period, int nt) {
    double sum = 0.5 * (f(0.0) + f(period));
    for (int j = 1; j < nt; ++j) sum += f(period * j / nt);
    return sum * period / nt;
}

template <typename F>
double trapezoid_time_refined(F&& f, double period, int nt, double target) {
    double coarse = trapezoid_time(f, period, nt / 2);
    double fine = trapezoid_time(f, period, nt);
    for (int round = 0; round < 4; ++round) {
        if (std::abs(fine - coarse) <= 3.0 * target * std::abs(fine)) break;
        coarse = fine;
        nt *= 2;
        fine = trapezoid_time(f, period, nt);
    }
    return fine;
}

// Product trapezoid over [0, T] x [0, L0]; f(t, y).
template <typename F>
double trapezoid_2d(F&& f, double period, double depth, int nt, int ny) {
    double sum = 0.0;
    for (int j = 0; j <= nt; ++j) {
        const double t = period * j / nt;
        const double wt = (j == 0 || j == nt) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < ny; ++i) {
            const double y = depth * i / (ny - 1);
            const double wy = (i == 0 || i == ny - 1) ? 0.5 : 1.0;
            row += wy * f(t, y);
        }
        sum += wt * row;
    }
    return sum * (period / nt) * (depth / (ny - 1));
}

template <typename F>
double trapezoid_2d_refined(F&& f, double period, double depth, int nt, int ny, double target) {
    double coarse = trapezoid_2d(f, period, depth, nt / 2, (ny - 1) / 2 + 1);
    double fine = trapezoid_2d(f, period, depth, nt, ny);
    for (int round = 0; round < 3; ++round) {
        if (std::abs(fine - coarse) <= 3.0 * target * std::abs(fine)) break;
        coarse = fine;
        nt *= 2;
        ny = 2 * ny - 1;
        fine = trapezoid_2d(f, period, depth, nt, ny);
    }
    return fine;
}

double surface_growth_integral(const ModelParameters& params, double target) {
    return trapezoid_time_refined(
        [&](double t) { return params.growth.rate(params.light(t)); }, params.period, 2048,
        target);
}

}  // namespace

}  // namespace detail

StateProfile period_map_apply(const StateProfile& profile, double mu,
                              const ModelParameters& params, const Grid& grid,
                              const EigenSolveConfig& config) {
    if (!(mu > 0.0)) {
        throw std::domain_error("period map: eigen weight mu must be positive");
    }
    if (profile.form != ProfileForm::z) {
        throw ConfigError("period map expects a z-form profile");
    }
    if (profile.size() != grid.n) {
        throw ConfigError("period map: profile size does not match grid");
    }
    StateProfile out = profile;
    StrangKernel kernel(params, grid);
    const int steps = config.steps_per_period;
    const double T = params.period;
    const double dt = T / steps;
    for (int k = 0; k < steps; ++k) {
        kernel.advance_linear(out.values, 1, T * (static_cast<double>(k) / steps), dt, mu);
    }
    return out;
}

namespace {

void check_eigen_config(const EigenSolveConfig& config) {
    if (!(config.power_tol > 0.0) || !(config.bisection_tol > 0.0) ||
        config.max_power_iterations < 1 || config.max_bisections < 1 ||
        config.steps_per_period < 8) {
        throw ConfigError("eigen solve config: tolerances must be positive, iteration budgets "
                          "at least 1, steps per period at least 8");
    }
}

}  // namespace

MultiplierResult principal_multiplier(double mu, const ModelParameters& params, const Grid& grid,
                                      const EigenSolveConfig& config,
                                      const std::vector<double>* warm_start) {
    if (!(mu > 0.0)) {
        throw std::domain_error("principal multiplier: eigen weight mu must be positive");
    }
    check_eigen_config(config);
    const auto map = detail::build_monodromy(params, grid, config, mu, false);
    auto out = detail::power_iterate(map, config, warm_start);
    return {out.multiplier, std::move(out.profile), out.iterations};
}

double compute_lambda0(const ModelParameters& params, const Grid& grid,
                       const EigenSolveConfig& config) {
    const auto r = principal_multiplier(1.0, params, grid, config);
    return -std::log(r.multiplier) / params.period;
}

IntegralRatio r0_star(const ModelParameters& params, int time_samples, int depth_samples) {
    const double target = 1e-6;
    IntegralRatio out;
    out.numerator = detail::trapezoid_2d_refined(
        [&](double t, double y) {
            const double rho = params.evolution.at(t).rho;
            return params.growth.rate(params.light(t) *
                                      std::exp(-params.background_turbidity * rho * y));
        },
        params.period, params.column_depth, time_samples, depth_samples, target);
    out.denominator = detail::trapezoid_2d_refined(
        [&](double t, double y) {
            return params.death.at_depth(params.evolution.at(t).rho * y, t);
        },
        params.period, params.column_depth, time_samples, depth_samples, target);
    return out;
}

IntegralRatio r0_lower_bound_general(const ModelParameters& params, int time_samples,
                                     int depth_samples) {
    IntegralRatio out = r0_star(params, time_samples, depth_samples);
    const double penalty = params.advection * params.advection / (4.0 * params.diffusion);
    out.denominator += penalty * params.period * params.column_depth;
    return out;
}

ClosedFormBounds r0_bounds_no_advection(const ModelParameters& params) {
    if (params.advection != 0.0) {
        throw ConfigError("closed-form bounds require alpha = 0");
    }
    const double target = 1e-8;
    ClosedFormBounds b;
    b.lower.numerator = detail::trapezoid_time_refined(
        [&](double t) {
            const double rho = params.evolution.at(t).rho;
            return params.growth.rate(
                params.light(t) *
                std::exp(-params.background_turbidity * rho * params.column_depth));
        },
        params.period, 2048, target);
    b.lower.denominator = detail::trapezoid_time_refined(
        [&](double t) {
            return params.death.at_depth(params.evolution.at(t).rho * params.column_depth, t);
        },
        params.period, 2048, target);
    b.upper.numerator = detail::surface_growth_integral(params, target);
    b.upper.denominator = detail::trapezoid_time_refined(
        [&](double t) { return params.death.at_depth(0.0, t); }, params.period, 2048, target);
    return b;
}

R0Report compute_r0(const ModelParameters& params, const Grid& grid,
                    const EigenSolveConfig& config) {
    // Structural sanity only; the standing hypotheses are the caller's business
    // (validate() reports on them), and the special closed-form cases sit right
    // on their boundary.
    if (!(params.diffusion > 0.0) || !(params.period > 0.0) || !(params.column_depth > 0.0)) {
        throw ConfigError("compute_r0 needs positive diffusion, period and depth");
    }
    check_eigen_config(config);

    R0Report report;
    report.r0_star = r0_star(params);
    report.lower_bound = r0_lower_bound_general(params);
    if (params.advection == 0.0) {
        report.bounds = r0_bounds_no_advection(params);
    }

    std::vector<double> warm;
    auto eval = [&](double mu) {
        const auto result =
            principal_multiplier(mu, params, grid, config, warm.empty() ? nullptr : &warm);
        warm = result.eigenprofile;
        report.power_iterations += result.iterations;
        return result;
    };

    // Bracket [lo, hi] with r(lo) >= 1 >= r(hi); r is strictly decreasing in mu.
    double lo = std::max(report.lower_bound.value(), 1e-8);
    auto at_lo = eval(lo);
    int expansions = 0;
    while (at_lo.multiplier < 1.0) {
        lo /= 2.0;
        if (++expansions > 60) {
            throw NumericalError("R0 out of range: no lower bracket above 1 found");
        }
        at_lo = eval(lo);
    }

    const double surface_ratio =
        detail::surface_growth_integral(params, 1e-8) /
        detail::trapezoid_time_refined(
            [&](double t) { return params.death.at_depth(0.0, t); }, params.period, 2048, 1e-8);
    double hi = std::max(surface_ratio, 2.0 * lo);
    auto at_hi = eval(hi);
    expansions = 0;
    while (at_hi.multiplier > 1.0) {
        hi *= 2.0;
        if (++expansions > 60) {
            throw NumericalError("R0 out of range: multiplier stays above 1 after 60 doublings");
        }
        at_hi = eval(hi);
    }

    while ((hi - lo) > config.bisection_tol * 0.5 * (hi + lo) &&
           report.bisections < config.max_bisections) {
        const double mid = 0.5 * (lo + hi);
        const auto at_mid = eval(mid);
        ++report.bisections;
        if (at_mid.multiplier >= 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    report.r0 = 0.5 * (lo + hi);
    const auto at_root = eval(report.r0);
    report.multiplier_residual = std::abs(at_root.multiplier - 1.0);
    report.eigenprofile = at_root.eigenprofile;

    const auto at_one = eval(1.0);
    report.lambda0 = -std::log(at_one.multiplier) / params.period;
    return report;
}

MonotonicityCheck eigenprofile_monotonicity_check(const R0Report& report,
                                                  const ModelParameters& params) {
    if (params.advection != 0.0) {
        throw ConfigError("eigenprofile monotonicity check requires alpha = 0");
    }
    if (report.eigenprofile.size() < 2) {
        throw ConfigError("eigenprofile monotonicity check: report has no eigenprofile");
    }
    const double tol = 1e-10 * sup_norm(report.eigenprofile);
    MonotonicityCheck check;
    check.decreasing = true;
    for (size_t i = 0; i + 1 < report.eigenprofile.size(); ++i) {
        const double diff = report.eigenprofile[i + 1] - report.eigenprofile[i];
        if (diff >= tol) {
            check.decreasing = false;
            check.max_violation = std::max(check.max_violation, diff);
        }
    }
    return check;
}

std::string to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::column_depth: return "L0";
        case SweepParameter::diffusion: return "D";
        case SweepParameter::sigma: return "sigma";
        case SweepParameter::advection: return "alpha";
    }
    return "?";
}

std::vector<SweepRow> sweep_r0(const ModelParameters& params, SweepParameter parameter,
                               const std::vector<double>& values, const Grid& grid,
                               const EigenSolveConfig& config) {
    for (size_t i = 0; i + 1 < values.size(); ++i) {
        if (!(values[i] < values[i + 1])) {
            throw ConfigError("sweep values must be sorted strictly ascending");
        }
    }
    if (parameter == SweepParameter::sigma && !params.evolution.is_parametric()) {
        throw ConfigError("sigma sweep requires a parametric evolution profile");
    }

    auto solve_one = [&, parameter](double value) -> SweepRow {
        SweepRow row;
        row.value = value;
        try {
            ModelParameters p = params;
            Grid g = grid;
            switch (parameter) {
                case SweepParameter::column_depth:
                    p.column_depth = value;
                    g = Grid::uniform(grid.n, value);
                    break;
                case SweepParameter::diffusion: p.diffusion = value; break;
                case SweepParameter::sigma:
                    p.evolution = EvolutionProfile::exp_cosine(value, p.period);
                    break;
                case SweepParameter::advection: p.advection = value; break;
            }
            const auto report = compute_r0(p, g, config);
            row.r0 = report.r0;
            row.lambda0 = report.lambda0;
            row.residual = report.multiplier_residual;
            row.status = "ok";
        } catch (const std::exception& e) {
            row.status = e.what();
        }
        return row;
    };

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(values.size());
    for (double value : values) {
        futures.push_back(std::async(std::launch::async, solve_one, value));
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

double adjoint_consistency_check(const ModelParameters& params, const Grid& grid,
                                 const EigenSolveConfig& config) {
    const auto forward = detail::build_monodromy(params, grid, config, 1.0, false);
    const auto adjoint = detail::build_monodromy(params, grid, config, 1.0, true);
    const auto rf = detail::power_iterate(forward, config, nullptr);
    const auto ra = detail::power_iterate(adjoint, config, nullptr);
    return std::abs(ra.multiplier - rf.multiplier) / rf.multiplier;
}

}  // namespace plankton
