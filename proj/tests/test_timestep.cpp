#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "plankton/discretize.hpp"
#include "plankton/scenarios.hpp"
#include "plankton/timestep.hpp"
#include "plankton/tridiagonal.hpp"

using namespace plankton;

namespace {

constexpr double kT = 2.0 * std::numbers::pi / 3.0;

// Independent reference solver for the untransformed density equation with
// combined-flux (Robin) boundary conditions, central differences and the same
// Strang arrangement. Deliberately shares no code with StrangKernel: it checks
// the exponential change of variables end to end, advection sign included.
class RobinReferenceSolver {
public:
    RobinReferenceSolver(const ModelParameters& params, const Grid& grid)
        : p_(params), g_(grid) {}

    void advance(std::vector<double>& v, double t, double dt) const {
        reaction_half(v, t, dt);
        transport_full(v, t + dt / 2.0, dt);
        reaction_half(v, t + dt, dt);
    }

private:
    void reaction_half(std::vector<double>& v, double t, double dt) const {
        const auto rate = p_.evolution.at(t);
        const double drift = rate.rho_dot / rate.rho;
        std::vector<double> cum(g_.n, 0.0);
        for (int i = 1; i < g_.n; ++i) {
            cum[i] = cum[i - 1] + g_.spacing * (v[i - 1] + v[i]) / 2.0;
        }
        for (int i = 0; i < g_.n; ++i) {
            const double y = g_.node(i);
            const double light = p_.light(t) * std::exp(-p_.background_turbidity * rate.rho * y -
                                                        p_.shading * rate.rho * cum[i]);
            const double c =
                p_.growth.rate(light) - p_.death.at_depth(rate.rho * y, t) - drift;
            v[i] *= std::exp(c * dt / 2.0);
        }
    }

    void transport_full(std::vector<double>& v, double t_mid, double dt) const {
        const int n = g_.n;
        const double h = g_.spacing;
        const double rho = p_.evolution.at(t_mid).rho;
        const double diff = p_.diffusion / (rho * rho * h * h);
        const double adv = p_.advection / (rho * 2.0 * h);
        std::vector<double> sub(n), diag(n), super(n);
        for (int i = 1; i < n - 1; ++i) {
            sub[i] = diff + adv;
            diag[i] = -2.0 * diff;
            super[i] = diff - adv;
        }
        // Ghost elimination for D v_y - alpha rho v = 0 at both ends.
        const double robin = 2.0 * h * p_.advection * rho / p_.diffusion;
        diag[0] = -2.0 * diff - robin * diff - p_.advection * p_.advection / p_.diffusion;
        super[0] = 2.0 * diff;
        sub[n - 1] = 2.0 * diff;
        diag[n - 1] = -2.0 * diff + robin * diff - p_.advection * p_.advection / p_.diffusion;

        std::vector<double> rhs(n);
        const double a = dt / 2.0;
        for (int i = 0; i < n; ++i) {
            rhs[i] = (1.0 + a * diag[i]) * v[i];
            if (i > 0) rhs[i] += a * sub[i] * v[i - 1];
            if (i < n - 1) rhs[i] += a * super[i] * v[i + 1];
        }
        std::vector<double> msub(n), mdiag(n), msuper(n);
        for (int i = 0; i < n; ++i) {
            msub[i] = -a * sub[i];
            mdiag[i] = 1.0 - a * diag[i];
            msuper[i] = -a * super[i];
        }
        TridiagonalFactor factor;
        factor.factor(msub, mdiag, msuper);
        factor.solve(rhs);
        v = rhs;
    }

    ModelParameters p_;
    Grid g_;
};

ModelParameters zero_reaction_params(double diffusion, double advection) {
    ModelParameters p = scenario("example-4.1a").params;
    p.diffusion = diffusion;
    p.advection = advection;
    p.growth = {0.0, 1.0};                  // g identically zero
    p.death = DeathField::affine(0.0, 0.0); // no mortality
    p.evolution = EvolutionProfile::exp_cosine(0.0, kT);
    return p;
}

}  // namespace

TEST_CASE("step: constant profile is a steady state of pure transport") {
    for (double alpha : {0.0, 0.002}) {
        const ModelParameters p = zero_reaction_params(0.001, alpha);
        const Grid grid = Grid::uniform(101, 1.0);
        const auto before = StateProfile::constant(grid, 3.7);
        const auto after = step(before, 0.0, kT / 500.0, p, grid);
        for (int i = 0; i < grid.n; ++i) {
            CHECK(std::abs(after.values[i] - 3.7) < 1e-13 * 3.7);
        }
    }
}

TEST_CASE("step: constant reaction reduces to the scalar exponential") {
    // g = 0 and d = -lambda make the reaction a constant growth lambda; the
    // transport leaves constants untouched, so one step is exactly e^{lambda dt}.
    const double growth = 0.3;
    ModelParameters p = zero_reaction_params(0.001, 0.001);
    p.death = DeathField::affine(-growth, 0.0);
    const Grid grid = Grid::uniform(51, 1.0);
    const double dt = 0.01;
    const auto after = step(StateProfile::constant(grid, 1.0), 0.0, dt, p, grid);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(after.values[i] == doctest::Approx(std::exp(growth * dt)).epsilon(1e-14));
    }
}

TEST_CASE("step: rejects v-form states and nonpositive dt") {
    const ModelParameters p = scenario("example-4.1a").params;
    const Grid grid = Grid::uniform(21, 1.0);
    CHECK_THROWS_AS(step(StateProfile::constant(grid, 1.0, ProfileForm::v), 0.0, 0.1, p, grid),
                    ConfigError);
    CHECK_THROWS_AS(step(StateProfile::constant(grid, 1.0), 0.0, 0.0, p, grid), ConfigError);
}

TEST_CASE("step: one period of the canonical run loses mass initially") {
    // The starting profile weights the hostile deep layer enough that total
    // mass drops across the first period (the long-run attractor is reached
    // only after the profile reshapes toward the surface).
    const ModelParameters p = scenario("example-4.1a").params;
    const Grid grid = Grid::uniform(201, 1.0);
    StateProfile z = preset_initial_profile(grid);
    const double mass0 = total_mass(z, grid, 0.0, p);
    const int steps = 500;
    StrangKernel kernel(p, grid);
    for (int k = 0; k < steps; ++k) {
        kernel.advance(z.values, kT * k / steps, kT / steps);
    }
    CHECK(total_mass(z, grid, kT, p) < mass0);
}

TEST_CASE("simulate: zero reaction on a fixed domain conserves mass") {
    for (double alpha : {0.0, 0.002, 0.05}) {
        const ModelParameters p = zero_reaction_params(0.001, alpha);
        const Grid grid = Grid::uniform(201, 1.0);
        SteppingConfig config;
        config.steps_per_period = 400;
        config.record_stride = 100;
        config.horizon_periods = 10;
        const auto traj = simulate(p, preset_initial_profile(grid), grid, config);
        const double mass0 = traj.diagnostics.front().mass;
        for (const auto& d : traj.diagnostics) {
            CHECK(std::abs(d.mass - mass0) < 1e-8 * mass0);
        }
    }
}

TEST_CASE("simulate: rejects negative or vanishing initial data") {
    const ModelParameters p = scenario("example-4.1a").params;
    const Grid grid = Grid::uniform(21, 1.0);
    SteppingConfig config;
    config.steps_per_period = 100;
    StateProfile negative = StateProfile::constant(grid, 1.0);
    negative.values[3] = -0.1;
    CHECK_THROWS_AS(simulate(p, negative, grid, config), ConfigError);
    CHECK_THROWS_AS(simulate(p, StateProfile::zeros(grid), grid, config), ConfigError);

    SteppingConfig coarse;
    coarse.steps_per_period = 50;  // below the floor
    CHECK_THROWS_AS(simulate(p, StateProfile::constant(grid, 1.0), grid, coarse), ConfigError);
}

TEST_CASE("simulate: positivity is preserved on the canonical scenario") {
    const ModelParameters p = scenario("example-4.1b").params;
    const Grid grid = Grid::uniform(201, 1.0);
    SteppingConfig config;
    config.steps_per_period = 2000;
    config.record_stride = 250;
    config.horizon_periods = 3;
    const auto traj = simulate(p, preset_initial_profile(grid), grid, config);
    for (const auto& d : traj.diagnostics) {
        CHECK(d.min >= -1e-12 * d.sup);
    }
}

TEST_CASE("simulate: pure decay stops early and classifies extinct") {
    ModelParameters p = zero_reaction_params(0.001, 0.001);
    p.death = DeathField::affine(0.4, 0.0);  // uniform mortality, no growth
    const Grid grid = Grid::uniform(101, 1.0);
    SteppingConfig config;
    config.steps_per_period = 200;
    config.record_stride = 50;
    config.horizon_periods = 40;
    const auto traj = simulate(p, preset_initial_profile(grid), grid, config);
    CHECK(traj.stopped_early);
    CHECK(traj.span() < 40 * kT - kT / 2);
    const auto verdict = classify(traj, config.thresholds);
    CHECK(verdict.kind == Dynamics::extinct);
    CHECK(verdict.decay_factor_per_period < 1.0);
}

TEST_CASE("simulate: supercritical pulse scenario reaches a positive cycle") {
    // Long-horizon behaviour of the canonical supercritical case; kept short
    // here (the acceptance suite runs the full horizon).
    const ModelParameters p = scenario("example-4.1b").params;
    const Grid grid = Grid::uniform(121, 1.0);
    SteppingConfig config;
    config.steps_per_period = 500;
    config.record_stride = 125;
    config.horizon_periods = 60;
    const auto traj = simulate(p, preset_initial_profile(grid), grid, config);
    CHECK_FALSE(traj.stopped_early);
    // Residuals shrink monotonically toward a periodic orbit.
    const auto& r = traj.period_residuals;
    REQUIRE(r.size() >= 10);
    CHECK(r.back() < 0.01);
    CHECK(r.back() < r[4]);
    CHECK(traj.diagnostics.back().sup > 1.0);
}

TEST_CASE("fixed domain reduction: coefficients identical with and without pulse machinery") {
    // sigma = 0 must reproduce the plain fixed-interval coefficients bitwise.
    const ModelParameters p = scenario("example-4.1a").params;
    const Grid grid = Grid::uniform(101, 1.0);
    const auto c = reaction_coefficients(p, grid, 0.37, StateProfile::zeros(grid));
    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.node(i);
        const double expected =
            p.growth.rate(p.light(0.37) * std::exp(-p.background_turbidity * y)) -
            (0.2 + 0.1 * y);
        CHECK(c[i] == expected);  // bitwise
    }
    const auto op = assemble_transport(p, grid, 0.37);
    const double h = grid.spacing;
    const double theta = p.advection / p.diffusion;
    CHECK(op.super[1] == p.diffusion / (h * h) * std::exp(theta * h / 2.0));  // bitwise
}

TEST_CASE("consistency of forms: transformed solve matches the Robin reference solver") {
    // Two-period run of the canonical pulse scenario in both representations.
    // This doubles as the audit of the advection sign in the change of
    // variables: a sign slip would show up at O(1), not at 1e-4.
    const ModelParameters p = scenario("example-4.1b").params;
    const Grid grid = Grid::uniform(201, 1.0);
    const int steps_per_period = 1000;
    const double dt = kT / steps_per_period;

    StateProfile z = preset_initial_profile(grid);
    StateProfile v_ref = to_v_form(z, p, grid, 0.0);

    StrangKernel kernel(p, grid);
    RobinReferenceSolver reference(p, grid);
    for (int k = 0; k < 2 * steps_per_period; ++k) {
        const double t = dt * k;
        kernel.advance(z.values, t, dt);
        reference.advance(v_ref.values, t, dt);
    }
    const auto v_from_z = to_v_form(z, p, grid, 2.0 * kT);
    const double scale = sup_norm(v_ref.values);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(std::abs(v_from_z.values[i] - v_ref.values[i]) < 1e-4 * scale);
    }
}

TEST_CASE("temporal self-convergence: halving dt is second order") {
    const ModelParameters p = scenario("example-4.1b").params;
    const Grid grid = Grid::uniform(101, 1.0);
    auto run = [&](int steps_per_period) {
        StateProfile z = preset_initial_profile(grid);
        StrangKernel kernel(p, grid);
        const double dt = kT / steps_per_period;
        for (int k = 0; k < 2 * steps_per_period; ++k) kernel.advance(z.values, dt * k, dt);
        return z.values;
    };
    const auto coarse = run(200);
    const auto mid = run(400);
    const auto fine = run(800);
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        e1 = std::max(e1, std::abs(coarse[i] - mid[i]));
        e2 = std::max(e2, std::abs(mid[i] - fine[i]));
    }
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("classify: synthetic edge cases") {
    const Grid grid = Grid::uniform(11, 1.0);
    auto make_trajectory = [&](std::vector<double> sups, double floor_value) {
        Trajectory traj;
        traj.grid = grid;
        traj.period = 1.0;
        for (size_t k = 0; k < sups.size(); ++k) {
            const double t = 0.5 * static_cast<double>(k);
            traj.times.push_back(t);
            StateProfile s = StateProfile::constant(grid, sups[k]);
            s.values[grid.n / 2] = floor_value * (sups[k] > 0 ? 1.0 : 0.0);
            traj.snapshots.push_back(s);
            traj.diagnostics.push_back(
                {t, sups[k], sups[k], std::min(sups[k], floor_value * (sups[k] > 0 ? 1.0 : 0.0))});
        }
        for (int k = 1; 2 * k < static_cast<int>(sups.size()); ++k) {
            const double a = sups[static_cast<size_t>(2 * k)];
            const double b = sups[static_cast<size_t>(2 * (k - 1))];
            traj.period_residuals.push_back(std::abs(a - b) / std::max(a, 1e-12));
        }
        return traj;
    };

    // All-zero trajectory: extinct outright.
    const auto zero = make_trajectory(std::vector<double>(9, 0.0), 0.0);
    CHECK(classify(zero, {}).kind == Dynamics::extinct);

    // Exactly periodic positive trajectory: persistent.
    const auto steady = make_trajectory(std::vector<double>(9, 2.0), 1.0);
    const auto verdict = classify(steady, {});
    CHECK(verdict.kind == Dynamics::persistent);
    CHECK(verdict.period_residual == 0.0);
    CHECK_FALSE(verdict.cycle.empty());

    // Positive but still drifting: undetermined.
    const auto drifting = make_trajectory({2.0, 1.9, 1.8, 1.7, 1.6, 1.5, 1.4, 1.3, 1.2}, 1.0);
    CHECK(classify(drifting, {}).kind == Dynamics::undetermined);

    // Too short for a residual verdict.
    const auto brief = make_trajectory({2.0, 2.0, 2.0}, 1.0);
    CHECK_THROWS_AS(classify(brief, {}), ConfigError);
}

TEST_CASE("decay rate estimate: recovers an exact exponential envelope") {
    const Grid grid = Grid::uniform(11, 1.0);
    Trajectory traj;
    traj.grid = grid;
    traj.period = 1.0;
    for (int k = 0; k <= 120; ++k) {
        const double t = 0.05 * k;
        const double sup = 2.0 * std::exp(-0.3 * t);
        traj.times.push_back(t);
        traj.snapshots.push_back(StateProfile::constant(grid, sup));
        traj.diagnostics.push_back({t, sup, sup, sup});
    }
    CHECK(decay_rate_estimate(traj) == doctest::Approx(-0.3).epsilon(1e-6));

    // A flat (persistent) trajectory has no decay rate.
    Trajectory flat = traj;
    for (auto& d : flat.diagnostics) d.sup = 1.0;
    CHECK_THROWS_AS(decay_rate_estimate(flat), ConfigError);

    // Nonpositive sup-norms in the window are an error.
    Trajectory broken = traj;
    broken.diagnostics.back().sup = 0.0;
    CHECK_THROWS_AS(decay_rate_estimate(broken), NumericalError);

    // Too short a span.
    Trajectory brief = traj;
    brief.times.resize(40);
    brief.diagnostics.resize(40);
    brief.snapshots.resize(40);
    CHECK_THROWS_AS(decay_rate_estimate(brief), ConfigError);
}
