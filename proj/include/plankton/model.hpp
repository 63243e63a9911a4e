#pragma once

#include <string>
#include <vector>

#include "plankton/errors.hpp"

namespace plankton {

/// Saturating light-growth response g(I) = a I / (1 + b I).
/// Strictly increasing, g(0) = 0, bounded above by a/b.
struct GrowthFunction {
    double a = 3.0;  // maximum-uptake coefficient (1/time)
    double b = 2.0;  // half-saturation shape coefficient (1/light-intensity)

    /// Growth rate at light intensity I >= 0. Throws std::domain_error for I < 0.
    double rate(double intensity) const;

    double ceiling() const { return a / b; }
};

/// T-periodic incident light intensity at the surface.
class LightSchedule {
public:
    static LightSchedule constant(double value);
    /// Samples at t_j = j * period / n, j = 0..n-1, wrapped periodically and
    /// linearly interpolated. Needs at least 2 samples.
    static LightSchedule sampled(std::vector<double> values, double period);

    double operator()(double t) const;

    bool is_constant() const { return samples_.size() == 1; }
    const std::vector<double>& samples() const { return samples_; }
    double declared_period() const { return period_; }

private:
    std::vector<double> samples_;
    double period_ = 0.0;  // 0 for constant mode
};

/// Per-capita death rate d(x, t) as a function of physical depth x and time t.
/// Affine mode d = c0 + c1 x covers the canonical scenarios; the sampled mode
/// holds a T-periodic lattice of values, bilinear between nodes.
class DeathField {
public:
    static DeathField affine(double c0, double c1);
    /// values[it * nx + ix] over x in [0, x_max] (nx nodes, clamped beyond) and
    /// t in [0, period) (nt rows, periodic). declared_monotone asserts d
    /// nondecreasing in x; validate() verifies the claim against the samples.
    static DeathField sampled(std::vector<double> values, int nx, int nt, double x_max,
                              double period, bool declared_monotone);

    double at_depth(double x, double t) const;

    bool is_affine() const { return mode_ == Mode::affine; }
    bool depth_monotone() const;  // d_x >= 0, not identically 0
    bool depth_independent() const;

    double affine_offset() const { return c0_; }
    double affine_slope() const { return c1_; }
    double declared_period() const { return period_; }
    double sampled_x_max() const { return x_max_; }
    const std::vector<double>& samples() const { return samples_; }
    int sample_nx() const { return nx_; }
    int sample_nt() const { return nt_; }
    bool sampled_monotone_declared() const { return declared_monotone_; }

private:
    enum class Mode { affine, sampled };
    Mode mode_ = Mode::affine;
    double c0_ = 0.0, c1_ = 0.0;
    std::vector<double> samples_;
    int nx_ = 0, nt_ = 0;
    double x_max_ = 0.0;
    double period_ = 0.0;
    bool declared_monotone_ = false;
};

/// Periodic domain-evolution rate rho(t) with rho(0) = 1, plus its derivative.
/// Parametric family rho(t) = exp(sigma * (1 - cos(omega t))), omega = 2 pi / T;
/// sigma = 0 reproduces a fixed domain. A sampled mode covers measured profiles.
class EvolutionProfile {
public:
    struct Rate {
        double rho;
        double rho_dot;
    };

    static EvolutionProfile fixed();
    static EvolutionProfile exp_cosine(double sigma, double period);
    /// Samples of rho at t_j = j * period / n (n >= 8); the derivative comes from
    /// 4th-order centered periodic differences on the sample grid, both linearly
    /// interpolated in between.
    static EvolutionProfile sampled(std::vector<double> rho_samples, double period);

    Rate at(double t) const;

    bool is_parametric() const { return mode_ == Mode::parametric; }
    double sigma() const;  // parametric mode only
    double declared_period() const { return period_; }
    const std::vector<double>& samples() const { return rho_samples_; }

    /// max rho(t) over one period (exact for parametric, sample max otherwise).
    double max_rho() const;
    double min_rho() const;

private:
    enum class Mode { parametric, sampled };
    Mode mode_ = Mode::parametric;
    double sigma_ = 0.0;
    double period_ = 0.0;  // 0 means "fixed, matches any declared period"
    std::vector<double> rho_samples_;
    std::vector<double> rho_dot_samples_;
};

/// All physical constants and function fields of the column model.
struct ModelParameters {
    double diffusion = 0.001;             // D, vertical turbulent diffusion (length^2/time)
    double advection = 0.0;               // alpha, sinking (>0) or buoyant (<0) rate (length/time)
    double background_turbidity = 0.2;    // k0 (1/length)
    double shading = 0.0;                 // k1, species absorption (1/(length*density))
    GrowthFunction growth;
    LightSchedule light = LightSchedule::constant(0.1);
    DeathField death = DeathField::affine(0.2, 0.1);
    EvolutionProfile evolution = EvolutionProfile::fixed();
    double column_depth = 1.0;            // L0 (length)
    double period = 1.0;                  // T (time)
};

/// Outcome of validate(): hard invariant breaches plus advisory warnings.
struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool ok() const { return violations.empty(); }
};

/// Light intensity at scaled depth y given the cumulative density integral
/// int_0^y v(s, t) ds supplied by the caller. Throws std::domain_error when y
/// lies outside [0, L0] or the cumulative integral is negative.
double light_intensity(const ModelParameters& params, double y, double t,
                       double density_cumulative);

/// Death rate at scaled depth y: d evaluated at physical depth rho(t) * y.
/// A nonpositive evaluation indicates an invalid model and throws ConfigError.
double death_rate(const ModelParameters& params, double y, double t);

/// Checks positivity, periodicity and normalization invariants on a sampling
/// lattice. Report-only: never throws.
ValidationReport validate(const ModelParameters& params);

}  // namespace plankton
