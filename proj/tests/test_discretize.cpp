#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plankton/discretize.hpp"
#include "plankton/scenarios.hpp"

using namespace plankton;

namespace {
constexpr double kT = 2.0 * std::numbers::pi / 3.0;

ModelParameters plain_params(double diffusion, double advection, double sigma = 0.0) {
    ModelParameters p = scenario("example-4.1a").params;
    p.diffusion = diffusion;
    p.advection = advection;
    p.evolution = EvolutionProfile::exp_cosine(sigma, kT);
    return p;
}
}  // namespace

TEST_CASE("transport stencil: pure diffusion rows") {
    const Grid grid = Grid::uniform(11, 1.0);
    const auto op = assemble_transport(plain_params(0.001, 0.0), grid, 0.0);
    const double h = grid.spacing;
    const double d_h2 = 0.001 / (h * h);
    for (int i = 1; i < grid.n - 1; ++i) {
        CHECK(op.sub[i] == doctest::Approx(d_h2).epsilon(1e-15));
        CHECK(op.diag[i] == doctest::Approx(-2.0 * d_h2).epsilon(1e-15));
        CHECK(op.super[i] == doctest::Approx(d_h2).epsilon(1e-15));
    }
    // No-flux closures degenerate to the mirror stencil when alpha = 0.
    CHECK(op.diag[0] == doctest::Approx(-2.0 * d_h2).epsilon(1e-15));
    CHECK(op.super[0] == doctest::Approx(2.0 * d_h2).epsilon(1e-15));
    CHECK(op.sub[grid.n - 1] == doctest::Approx(2.0 * d_h2).epsilon(1e-15));
    CHECK(op.diag[grid.n - 1] == doctest::Approx(-2.0 * d_h2).epsilon(1e-15));
}

TEST_CASE("transport stencil: advection matches central differences to O(h^2 theta^2)") {
    // The fitted face weights equal the central-difference stencil up to a
    // relative O((alpha h / 2D)^2) correction (~3e-6 here).
    const Grid grid = Grid::uniform(201, 1.0);
    const auto op = assemble_transport(plain_params(0.001, 0.001), grid, 0.0);
    const double h = grid.spacing;
    const double d_h2 = 0.001 / (h * h);
    const double adv = 0.001 / (2.0 * h);
    for (int i : {1, 100, 199}) {
        CHECK(op.sub[i] == doctest::Approx(d_h2 - adv).epsilon(1e-5));
        CHECK(op.diag[i] == doctest::Approx(-2.0 * d_h2).epsilon(1e-5));
        CHECK(op.super[i] == doctest::Approx(d_h2 + adv).epsilon(1e-5));
    }
}

TEST_CASE("transport stencil: diffusion rescales with the domain factor") {
    // At the trough of the shrinking pulse rho = e^{-1}, so D/rho^2 = D e^2.
    const Grid grid = Grid::uniform(11, 1.0);
    const auto op = assemble_transport(plain_params(0.001, 0.0, -0.5), grid,
                                       std::numbers::pi / 3.0);
    const double h = grid.spacing;
    CHECK(op.super[5] == doctest::Approx(0.0073890560989306495 / (h * h)).epsilon(1e-12));
}

TEST_CASE("transport operator: constants lie in the kernel (exact row sums)") {
    const Grid grid = Grid::uniform(41, 1.0);
    for (double alpha : {0.0, 0.001, 0.05}) {
        const auto op = assemble_transport(plain_params(0.001, alpha, -0.5), grid, 0.4);
        std::vector<double> ones(grid.n, 1.0), out(grid.n);
        op.apply(ones, out);
        for (int i = 0; i < grid.n; ++i) {
            CHECK(std::abs(out[i]) < 1e-9);  // h^-2 scale ~ 1.6e6, so this is ~1e-15 relative
        }
    }
}

TEST_CASE("transport operator: discrete no-flux mass identity") {
    // The trapezoid functional weighted by e^{theta y} annihilates the operator
    // exactly, for any alpha, at any fixed time.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    const Grid grid = Grid::uniform(31, 1.0);
    for (double alpha : {0.0, 0.002, 0.05}) {
        const ModelParameters p = plain_params(0.001, alpha, -0.5);
        const double t = 0.7;
        const auto op = assemble_transport(p, grid, t);
        const double theta = alpha / p.diffusion * p.evolution.at(t).rho;
        std::vector<double> z(grid.n), az(grid.n);
        for (auto& v : z) v = u(rng);
        op.apply(z, az);
        double weighted_sum = 0.0, scale = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            const double w = (i == 0 || i == grid.n - 1) ? grid.spacing / 2 : grid.spacing;
            weighted_sum += w * std::exp(theta * grid.node(i)) * az[i];
            scale += w * std::exp(theta * grid.node(i)) * std::abs(az[i]);
        }
        CHECK(std::abs(weighted_sum) < 1e-12 * std::max(scale, 1.0));
    }
}

TEST_CASE("transport operator: second-order convergence on a smooth Neumann function") {
    // f = cos(pi y / L0) satisfies the boundary conditions; the applied operator
    // converges at second order in the sup norm (alpha = 0 includes the
    // boundary rows; with advection the half-cell closures are first order
    // pointwise at the two boundary nodes, so measure interior rows there).
    auto operator_error = [](double alpha, int n, bool interior_only) {
        const ModelParameters p = plain_params(0.001, alpha, -0.5);
        const double t = 0.3;
        const auto rate = p.evolution.at(t);
        const Grid grid = Grid::uniform(n, 1.0);
        const auto op = assemble_transport(p, grid, t);
        std::vector<double> f(grid.n), out(grid.n);
        const double w = std::numbers::pi / grid.depth;
        for (int i = 0; i < grid.n; ++i) f[i] = std::cos(w * grid.node(i));
        op.apply(f, out);
        double err = 0.0;
        const int lo = interior_only ? 1 : 0;
        const int hi = interior_only ? grid.n - 1 : grid.n;
        for (int i = lo; i < hi; ++i) {
            const double y = grid.node(i);
            const double exact = -p.diffusion / (rate.rho * rate.rho) * w * w * std::cos(w * y) -
                                 alpha / rate.rho * w * std::sin(w * y);
            err = std::max(err, std::abs(out[i] - exact));
        }
        return err;
    };

    for (bool interior : {false, true}) {
        const double alpha = interior ? 0.001 : 0.0;
        const double e1 = operator_error(alpha, 51, interior);
        const double e2 = operator_error(alpha, 101, interior);
        const double e3 = operator_error(alpha, 201, interior);
        const double order12 = std::log2(e1 / e2);
        const double order23 = std::log2(e2 / e3);
        CHECK(order12 > 1.9);
        CHECK(order12 < 2.1);
        CHECK(order23 > 1.9);
        CHECK(order23 < 2.1);
    }
}

TEST_CASE("transport operator: cell Peclet warning") {
    const Grid grid = Grid::uniform(11, 1.0);  // h = 0.1
    const auto fine = assemble_transport(plain_params(0.001, 0.001), grid, 0.0);
    CHECK_FALSE(fine.peclet_warning);
    // |alpha| h / (2D) = 0.1 * 0.1 / 0.002 = 5 >= 1.
    const auto coarse = assemble_transport(plain_params(0.001, 0.1), grid, 0.0);
    CHECK(coarse.peclet_warning);
    CHECK(coarse.max_cell_peclet == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("reaction coefficients: eigen mode pointwise values") {
    const ModelParameters p = plain_params(0.001, 0.0);
    const Grid grid = Grid::uniform(101, 1.0);
    const auto c = reaction_coefficients(p, grid, 0.0, 1.0);
    // Surface: g(0.1) - d(0) = 0.25 - 0.2 = 0.05.
    CHECK(c[0] == doctest::Approx(0.05).epsilon(1e-13));
    // Bottom: g(0.1 e^{-0.2}) - 0.3.
    const double bottom = p.growth.rate(0.1 * std::exp(-0.2)) - 0.3;
    CHECK(c[100] == doctest::Approx(bottom).epsilon(1e-13));

    CHECK_THROWS_AS(reaction_coefficients(p, grid, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(reaction_coefficients(p, grid, 0.0, -1.0), std::domain_error);
}

TEST_CASE("reaction coefficients: zero state reduces nonlinear mode to mu = 1") {
    const ModelParameters p = scenario("example-4.1b").params;
    const Grid grid = Grid::uniform(61, 1.0);
    const auto zero = StateProfile::zeros(grid);
    for (double t : {0.0, 0.5, 1.7}) {
        const auto nonlinear = reaction_coefficients(p, grid, t, zero);
        const auto eigen = reaction_coefficients(p, grid, t, 1.0);
        for (int i = 0; i < grid.n; ++i) {
            CHECK(nonlinear[i] == doctest::Approx(eigen[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("reaction coefficients: fixed domain removes the dilution terms") {
    // With rho == 1 the coefficients equal g - d regardless of alpha.
    ModelParameters p = plain_params(0.001, 0.7);
    p.shading = 0.0;
    const Grid grid = Grid::uniform(41, 1.0);
    const auto c = reaction_coefficients(p, grid, 0.9, 1.0);
    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.node(i);
        const double expected =
            p.growth.rate(0.1 * std::exp(-0.2 * y)) - (0.2 + 0.1 * y);
        CHECK(c[i] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("cumulative integral: exact on constants and linear profiles") {
    const Grid grid = Grid::uniform(101, 1.0);
    const auto zeros = cumulative_integral(StateProfile::zeros(grid, ProfileForm::v), grid);
    for (double v : zeros) CHECK(v == 0.0);

    const auto of_const = cumulative_integral(StateProfile::constant(grid, 2.5, ProfileForm::v),
                                              grid);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(of_const[i] == doctest::Approx(2.5 * grid.node(i)).epsilon(1e-14));
    }

    StateProfile linear = StateProfile::zeros(grid, ProfileForm::v);
    for (int i = 0; i < grid.n; ++i) linear.values[i] = grid.node(i);
    const auto of_linear = cumulative_integral(linear, grid);
    CHECK(std::abs(of_linear[grid.n - 1] - 0.5) < 1e-12);

    CHECK_THROWS_AS(cumulative_integral(StateProfile::zeros(grid, ProfileForm::z), grid),
                    ConfigError);
}

TEST_CASE("cumulative integral: linear and monotone") {
    const Grid grid = Grid::uniform(33, 1.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    StateProfile a = StateProfile::zeros(grid, ProfileForm::v);
    StateProfile b = StateProfile::zeros(grid, ProfileForm::v);
    for (int i = 0; i < grid.n; ++i) {
        a.values[i] = u(rng);
        b.values[i] = u(rng);
    }
    const double s = 1.7;
    StateProfile combo = StateProfile::zeros(grid, ProfileForm::v);
    for (int i = 0; i < grid.n; ++i) combo.values[i] = a.values[i] + s * b.values[i];

    const auto ca = cumulative_integral(a, grid);
    const auto cb = cumulative_integral(b, grid);
    const auto cc = cumulative_integral(combo, grid);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(cc[i] == doctest::Approx(ca[i] + s * cb[i]).epsilon(1e-12));
        if (i > 0) CHECK(ca[i] >= ca[i - 1]);  // nonnegative input => nondecreasing
    }
}

TEST_CASE("total mass: scales with the domain factor") {
    // rho(T/2) = e^{2 sigma} = 2 for sigma = ln(2)/2; v = 1 on [0, 1] has mass 2.
    ModelParameters p = plain_params(0.001, 0.0, std::log(2.0) / 2.0);
    const Grid grid = Grid::uniform(51, 1.0);
    const auto v = StateProfile::constant(grid, 1.0, ProfileForm::v);
    CHECK(total_mass(v, grid, kT / 2.0, p) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(total_mass(StateProfile::zeros(grid, ProfileForm::v), grid, 0.3, p) == 0.0);
}

TEST_CASE("total mass: canonical initial profile integrates to 4") {
    // Both cosine terms integrate to zero over [0, 1]; alpha = 0 makes v = z.
    ModelParameters p = plain_params(0.001, 0.0);
    const Grid grid = Grid::uniform(201, 1.0);
    const auto z0 = preset_initial_profile(grid);
    CHECK(total_mass(z0, grid, 0.0, p) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("form change: identity at alpha = 0, exponential weight otherwise") {
    const Grid grid = Grid::uniform(21, 1.0);
    const ModelParameters no_adv = plain_params(0.001, 0.0);
    const auto z = StateProfile::constant(grid, 1.3);
    const auto v = to_v_form(z, no_adv, grid, 0.0);
    for (int i = 0; i < grid.n; ++i) CHECK(v.values[i] == z.values[i]);

    // alpha/D = 1, rho = 1: v(1) = e * z(1).
    const ModelParameters unit = plain_params(0.001, 0.001);
    const auto ones = StateProfile::constant(grid, 1.0);
    const auto scaled = to_v_form(ones, unit, grid, 0.0);
    CHECK(scaled.values[grid.n - 1] == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

    // Overflow guard: |alpha/D| rho L0 > 700.
    const ModelParameters extreme = plain_params(1e-6, 0.001);
    CHECK_THROWS_AS(to_v_form(ones, extreme, grid, 0.0), ConfigError);
}

TEST_CASE("form change: round trip at 1e-14") {
    const ModelParameters p = plain_params(0.001, 0.002, -0.5);
    const Grid grid = Grid::uniform(64, 1.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    StateProfile z = StateProfile::zeros(grid);
    for (auto& x : z.values) x = u(rng);
    const auto back = to_z_form(to_v_form(z, p, grid, 0.9), p, grid, 0.9);
    for (int i = 0; i < grid.n; ++i) {
        CHECK(std::abs(back.values[i] - z.values[i]) < 1e-14 * std::max(1.0, z.values[i]));
    }
}
