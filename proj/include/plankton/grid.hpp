#pragma once

#include <vector>

#include "plankton/errors.hpp"

namespace plankton {

/// Uniform node grid on [0, L0]: y_i = i * L0 / (n - 1), i = 0..n-1.
struct Grid {
    int n = 0;
    double depth = 0.0;    // L0
    double spacing = 0.0;  // h = L0 / (n - 1)

    static Grid uniform(int node_count, double column_depth) {
        if (node_count < 5) {
            throw ConfigError("grid needs at least 5 nodes, got " + std::to_string(node_count));
        }
        if (!(column_depth > 0.0)) {
            throw ConfigError("grid depth must be positive");
        }
        Grid g;
        g.n = node_count;
        g.depth = column_depth;
        g.spacing = column_depth / static_cast<double>(node_count - 1);
        return g;
    }

    // node(n-1) == depth exactly: i/(n-1) evaluates to 1.0 at the last node.
    double node(int i) const { return depth * (static_cast<double>(i) / static_cast<double>(n - 1)); }
};

enum class ProfileForm {
    z,  // exponentially transformed state, Neumann boundary conditions
    v,  // physical-coordinate density pulled back to [0, L0]
};

/// Nodal density values at one instant, in either representation.
struct StateProfile {
    std::vector<double> values;
    ProfileForm form = ProfileForm::z;

    static StateProfile zeros(const Grid& grid, ProfileForm f = ProfileForm::z) {
        return StateProfile{std::vector<double>(static_cast<size_t>(grid.n), 0.0), f};
    }
    static StateProfile constant(const Grid& grid, double value, ProfileForm f = ProfileForm::z) {
        return StateProfile{std::vector<double>(static_cast<size_t>(grid.n), value), f};
    }

    int size() const { return static_cast<int>(values.size()); }
};

inline double sup_norm(const std::vector<double>& values) {
    double m = 0.0;
    for (double x : values) {
        double a = x < 0 ? -x : x;
        if (a > m) m = a;
    }
    return m;
}

inline double min_value(const std::vector<double>& values) {
    double m = values.empty() ? 0.0 : values.front();
    for (double x : values) {
        if (x < m) m = x;
    }
    return m;
}

}  // namespace plankton
