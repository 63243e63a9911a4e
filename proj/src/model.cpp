#include "plankton/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plankton {

namespace {

// Wraps t into [0, period).
double wrap_periodic(double t, double period) {
    double s = std::fmod(t, period);
    if (s < 0.0) s += period;
    return s;
}

// Periodic linear interpolation on samples at t_j = j * period / n.
double interp_periodic(const std::vector<double>& samples, double period, double t) {
    const size_t n = samples.size();
    const double s = wrap_periodic(t, period) * static_cast<double>(n) / period;
    const size_t j = std::min(static_cast<size_t>(s), n - 1);
    const double frac = s - static_cast<double>(j);
    const size_t jnext = (j + 1) % n;
    return samples[j] + frac * (samples[jnext] - samples[j]);
}

}  // namespace

double GrowthFunction::rate(double intensity) const {
    if (intensity < 0.0) {
        throw std::domain_error("growth rate: negative light intensity");
    }
    return a * intensity / (1.0 + b * intensity);
}

LightSchedule LightSchedule::constant(double value) {
    LightSchedule s;
    s.samples_ = {value};
    s.period_ = 0.0;
    return s;
}

LightSchedule LightSchedule::sampled(std::vector<double> values, double period) {
    if (values.size() < 2) {
        throw ConfigError("sampled light schedule needs at least 2 samples per period");
    }
    if (!(period > 0.0)) {
        throw ConfigError("sampled light schedule needs a positive period");
    }
    LightSchedule s;
    s.samples_ = std::move(values);
    s.period_ = period;
    return s;
}

double LightSchedule::operator()(double t) const {
    if (samples_.size() == 1) return samples_[0];
    return interp_periodic(samples_, period_, t);
}

DeathField DeathField::affine(double c0, double c1) {
    DeathField d;
    d.mode_ = Mode::affine;
    d.c0_ = c0;
    d.c1_ = c1;
    return d;
}

DeathField DeathField::sampled(std::vector<double> values, int nx, int nt, double x_max,
                               double period, bool declared_monotone) {
    if (nx < 2 || nt < 2) {
        throw ConfigError("sampled death field needs at least a 2x2 lattice");
    }
    if (values.size() != static_cast<size_t>(nx) * static_cast<size_t>(nt)) {
        throw ConfigError("sampled death field: value count does not match nx*nt");
    }
    if (!(x_max > 0.0) || !(period > 0.0)) {
        throw ConfigError("sampled death field needs positive x_max and period");
    }
    DeathField d;
    d.mode_ = Mode::sampled;
    d.samples_ = std::move(values);
    d.nx_ = nx;
    d.nt_ = nt;
    d.x_max_ = x_max;
    d.period_ = period;
    d.declared_monotone_ = declared_monotone;
    return d;
}

double DeathField::at_depth(double x, double t) const {
    if (mode_ == Mode::affine) {
        return c0_ + c1_ * x;
    }
    // Bilinear: periodic rows in t, clamped columns in x.
    const double sx = std::clamp(x / x_max_, 0.0, 1.0) * static_cast<double>(nx_ - 1);
    const int ix = std::min(static_cast<int>(sx), nx_ - 2);
    const double fx = sx - ix;
    const double st = wrap_periodic(t, period_) * static_cast<double>(nt_) / period_;
    const int it = std::min(static_cast<int>(st), nt_ - 1);
    const double ft = st - it;
    const int itn = (it + 1) % nt_;
    auto v = [&](int row, int col) { return samples_[static_cast<size_t>(row) * nx_ + col]; };
    const double lo = v(it, ix) + fx * (v(it, ix + 1) - v(it, ix));
    const double hi = v(itn, ix) + fx * (v(itn, ix + 1) - v(itn, ix));
    return lo + ft * (hi - lo);
}

bool DeathField::depth_monotone() const {
    if (mode_ == Mode::affine) return c1_ > 0.0;
    return declared_monotone_;
}

bool DeathField::depth_independent() const {
    if (mode_ == Mode::affine) return c1_ == 0.0;
    for (int it = 0; it < nt_; ++it) {
        for (int ix = 1; ix < nx_; ++ix) {
            if (samples_[static_cast<size_t>(it) * nx_ + ix] != samples_[static_cast<size_t>(it) * nx_]) {
                return false;
            }
        }
    }
    return true;
}

EvolutionProfile EvolutionProfile::fixed() {
    EvolutionProfile p;
    p.mode_ = Mode::parametric;
    p.sigma_ = 0.0;
    p.period_ = 0.0;
    return p;
}

EvolutionProfile EvolutionProfile::exp_cosine(double sigma, double period) {
    if (!(period > 0.0)) {
        throw ConfigError("evolution profile needs a positive period");
    }
    EvolutionProfile p;
    p.mode_ = Mode::parametric;
    p.sigma_ = sigma;
    p.period_ = period;
    return p;
}

EvolutionProfile EvolutionProfile::sampled(std::vector<double> rho_samples, double period) {
    if (rho_samples.size() < 8) {
        throw ConfigError("sampled evolution profile needs at least 8 samples per period");
    }
    if (!(period > 0.0)) {
        throw ConfigError("evolution profile needs a positive period");
    }
    EvolutionProfile p;
    p.mode_ = Mode::sampled;
    p.period_ = period;
    p.rho_samples_ = std::move(rho_samples);
    // 4th-order centered periodic differences on the sample grid.
    const size_t n = p.rho_samples_.size();
    const double dt = period / static_cast<double>(n);
    p.rho_dot_samples_.resize(n);
    auto s = [&](size_t j) { return p.rho_samples_[(j + 2 * n) % n]; };
    for (size_t j = 0; j < n; ++j) {
        p.rho_dot_samples_[j] =
            (-s(j + 2) + 8.0 * s(j + 1) - 8.0 * s(j - 1 + n) + s(j - 2 + n)) / (12.0 * dt);
    }
    return p;
}

EvolutionProfile::Rate EvolutionProfile::at(double t) const {
    if (mode_ == Mode::parametric) {
        if (sigma_ == 0.0) return {1.0, 0.0};
        const double omega = 2.0 * std::numbers::pi / period_;
        const double rho = std::exp(sigma_ * (1.0 - std::cos(omega * t)));
        return {rho, sigma_ * omega * std::sin(omega * t) * rho};
    }
    return {interp_periodic(rho_samples_, period_, t),
            interp_periodic(rho_dot_samples_, period_, t)};
}

double EvolutionProfile::sigma() const {
    if (mode_ != Mode::parametric) {
        throw ConfigError("evolution profile has no sigma: not in parametric mode");
    }
    return sigma_;
}

double EvolutionProfile::max_rho() const {
    if (mode_ == Mode::parametric) {
        return sigma_ <= 0.0 ? 1.0 : std::exp(2.0 * sigma_);
    }
    return *std::max_element(rho_samples_.begin(), rho_samples_.end());
}

double EvolutionProfile::min_rho() const {
    if (mode_ == Mode::parametric) {
        return sigma_ >= 0.0 ? 1.0 : std::exp(2.0 * sigma_);
    }
    return *std::min_element(rho_samples_.begin(), rho_samples_.end());
}

double light_intensity(const ModelParameters& params, double y, double t,
                       double density_cumulative) {
    if (y < 0.0 || y > params.column_depth) {
        throw std::domain_error("light intensity: depth outside [0, L0]");
    }
    if (density_cumulative < 0.0) {
        throw std::domain_error("light intensity: negative cumulative density");
    }
    const double rho = params.evolution.at(t).rho;
    const double exponent =
        -params.background_turbidity * rho * y - params.shading * rho * density_cumulative;
    return params.light(t) * std::exp(exponent);
}

double death_rate(const ModelParameters& params, double y, double t) {
    const double rho = params.evolution.at(t).rho;
    const double d = params.death.at_depth(rho * y, t);
    if (!(d > 0.0)) {
        throw ConfigError("death rate nonpositive at depth " + std::to_string(rho * y) +
                          ", t = " + std::to_string(t));
    }
    return d;
}

namespace {

// Checks whether f is (T/k)-periodic on a lattice for some k in 2..12.
template <typename F>
bool has_shorter_period(F&& f, double period, double tol) {
    for (int k = 2; k <= 12; ++k) {
        const double sub = period / k;
        bool matches = true;
        for (int j = 0; j < 37 && matches; ++j) {
            const double t = period * j / 37.0;
            if (std::abs(f(t + sub) - f(t)) > tol) matches = false;
        }
        if (matches) return true;
    }
    return false;
}

template <typename F>
bool varies_in_time(F&& f, double period, double tol) {
    const double base = f(0.0);
    for (int j = 1; j < 37; ++j) {
        if (std::abs(f(period * j / 37.0) - base) > tol) return true;
    }
    return false;
}

}  // namespace

ValidationReport validate(const ModelParameters& params) {
    ValidationReport report;
    auto violation = [&](const std::string& msg) { report.violations.push_back(msg); };
    auto warning = [&](const std::string& msg) { report.warnings.push_back(msg); };

    if (!(params.diffusion > 0.0)) violation("diffusion D must be positive");
    if (!(params.column_depth > 0.0)) violation("column depth L0 must be positive");
    if (!(params.period > 0.0)) violation("period T must be positive");
    if (params.background_turbidity < 0.0) violation("background turbidity k0 must be >= 0");
    if (params.shading < 0.0) violation("absorption coefficient k1 must be >= 0");
    if (!(params.growth.a > 0.0) || !(params.growth.b > 0.0)) {
        violation("growth coefficients a, b must be positive");
    }
    if (!report.violations.empty()) return report;

    const double T = params.period;

    // Declared periods of the function fields must match T.
    if (params.light.declared_period() > 0.0 &&
        std::abs(params.light.declared_period() - T) > 1e-12 * T) {
        violation("light schedule period differs from model period");
    }
    if (params.evolution.declared_period() > 0.0 &&
        std::abs(params.evolution.declared_period() - T) > 1e-12 * T) {
        violation("evolution profile period differs from model period");
    }
    if (!params.death.is_affine() && std::abs(params.death.declared_period() - T) > 1e-12 * T) {
        violation("death field period differs from model period");
    }
    if (!report.violations.empty()) return report;

    // rho(0) = 1 and rho > 0 over one period.
    const auto r0 = params.evolution.at(0.0);
    if (std::abs(r0.rho - 1.0) > 1e-12) {
        violation("evolution rate must satisfy rho(0) = 1");
    }
    double rho_max = 0.0;
    for (int j = 0; j <= 64; ++j) {
        const double t = T * j / 64.0;
        const double rho = params.evolution.at(t).rho;
        if (!(rho > 0.0)) {
            violation("evolution rate must stay positive over the period");
            break;
        }
        rho_max = std::max(rho_max, rho);
    }
    rho_max = std::max(rho_max, params.evolution.max_rho());

    // Incident light: nonnegative, not identically zero, T-periodic.
    double light_peak = 0.0;
    bool light_negative = false;
    double light_period_residual = 0.0;
    for (int j = 0; j <= 64; ++j) {
        const double t = T * j / 64.0;
        const double I = params.light(t);
        if (I < 0.0) light_negative = true;
        light_peak = std::max(light_peak, I);
        light_period_residual = std::max(light_period_residual, std::abs(params.light(t + T) - I));
    }
    if (light_negative) violation("incident light must be nonnegative");
    if (light_peak <= 0.0) violation("incident light must not vanish identically");
    if (light_period_residual > 1e-9 * std::max(1.0, light_peak)) {
        violation("incident light is not T-periodic");
    }

    // Evolution periodicity.
    double rho_period_residual = 0.0;
    for (int j = 0; j <= 64; ++j) {
        const double t = T * j / 64.0;
        rho_period_residual =
            std::max(rho_period_residual, std::abs(params.evolution.at(t + T).rho -
                                                   params.evolution.at(t).rho));
    }
    if (rho_period_residual > 1e-9 * std::max(1.0, rho_max)) {
        violation("evolution rate is not T-periodic");
    }

    // Death field: positive and T-periodic on [0, rho_max * L0] x [0, T].
    const double x_max = rho_max * params.column_depth;
    bool death_positive = true;
    double death_scale = 0.0;
    double death_period_residual = 0.0;
    for (int jt = 0; jt <= 32 && death_positive; ++jt) {
        const double t = T * jt / 32.0;
        for (int jx = 0; jx <= 32; ++jx) {
            const double x = x_max * jx / 32.0;
            const double d = params.death.at_depth(x, t);
            death_scale = std::max(death_scale, std::abs(d));
            if (!(d > 0.0)) {
                violation("death rate must be positive on [0, rho_max*L0] x [0, T]");
                death_positive = false;
                break;
            }
            death_period_residual =
                std::max(death_period_residual, std::abs(params.death.at_depth(x, t + T) - d));
        }
    }
    if (death_positive && death_period_residual > 1e-9 * std::max(1.0, death_scale)) {
        violation("death rate is not T-periodic");
    }

    // Standing hypothesis: either d nondecreasing (and somewhere increasing) in
    // depth, or d depth-independent with k0 > 0.
    if (params.death.is_affine() && params.death.affine_slope() < 0.0) {
        violation("death rate decreasing in depth violates the monotonicity hypothesis");
    }
    if (!params.death.depth_monotone() && !(params.background_turbidity > 0.0)) {
        violation("k0 = 0 requires a depth-monotone death rate (or declare d depth-independent with k0 > 0)");
    }
    if (!params.death.is_affine() && params.death.sampled_monotone_declared()) {
        // Verify the declared monotonicity against the samples.
        const auto& s = params.death.samples();
        const int nx = params.death.sample_nx();
        const int nt = params.death.sample_nt();
        for (int it = 0; it < nt; ++it) {
            for (int ix = 0; ix + 1 < nx; ++ix) {
                if (s[static_cast<size_t>(it) * nx + ix + 1] <
                    s[static_cast<size_t>(it) * nx + ix]) {
                    violation("death field declared depth-monotone but samples decrease in x");
                    it = nt;
                    break;
                }
            }
        }
    }

    // Declared-period minimality: advisory, and only meaningful when some field
    // actually varies in time.
    const double minimality_tol = 1e-9 * std::max({1.0, rho_max, light_peak, death_scale});
    auto rho_of = [&](double t) { return params.evolution.at(t).rho; };
    auto light_of = [&](double t) { return params.light(t); };
    auto death_of = [&](double t) { return params.death.at_depth(0.7 * x_max, t); };
    const bool any_varies = varies_in_time(rho_of, T, minimality_tol) ||
                            varies_in_time(light_of, T, minimality_tol) ||
                            varies_in_time(death_of, T, minimality_tol);
    if (any_varies && has_shorter_period(rho_of, T, minimality_tol) &&
        has_shorter_period(light_of, T, minimality_tol) &&
        has_shorter_period(death_of, T, minimality_tol)) {
        warning("declared period T is not minimal: all time-dependent fields repeat on a subdivision of T");
    }

    return report;
}

}  // namespace plankton
