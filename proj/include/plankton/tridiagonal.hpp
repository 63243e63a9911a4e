#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plankton/errors.hpp"

namespace plankton {

/// Tridiagonal matrix in banded storage. sub[0] and super[n-1] are unused (kept 0).
struct TridiagonalOperator {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;

    // Diagnostics attached at assembly time.
    double max_cell_peclet = 0.0;
    bool peclet_warning = false;

    int size() const { return static_cast<int>(diag.size()); }

    void resize(int n) {
        sub.assign(static_cast<size_t>(n), 0.0);
        diag.assign(static_cast<size_t>(n), 0.0);
        super.assign(static_cast<size_t>(n), 0.0);
    }

    /// out = A x
    void apply(std::span<const double> x, std::span<double> out) const {
        const int n = size();
        for (int i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += sub[i] * x[i - 1];
            if (i < n - 1) s += super[i] * x[i + 1];
            out[i] = s;
        }
    }
};

/// LU factorization of a tridiagonal matrix (Thomas algorithm, no pivoting).
/// Factor once, then solve repeatedly for many right-hand sides.
class TridiagonalFactor {
public:
    void factor(std::span<const double> sub, std::span<const double> diag,
                std::span<const double> super) {
        const size_t n = diag.size();
        cprime_.resize(n);
        inv_pivot_.resize(n);
        sub_.assign(sub.begin(), sub.end());
        double piv = diag[0];
        check_pivot(piv, 0);
        inv_pivot_[0] = 1.0 / piv;
        cprime_[0] = super[0] * inv_pivot_[0];
        for (size_t i = 1; i < n; ++i) {
            piv = diag[i] - sub[i] * cprime_[i - 1];
            check_pivot(piv, i);
            inv_pivot_[i] = 1.0 / piv;
            cprime_[i] = super[i] * inv_pivot_[i];
        }
    }

    /// Solves M x = rhs in place.
    void solve(std::span<double> rhs) const {
        const size_t n = inv_pivot_.size();
        rhs[0] *= inv_pivot_[0];
        for (size_t i = 1; i < n; ++i) {
            rhs[i] = (rhs[i] - sub_[i] * rhs[i - 1]) * inv_pivot_[i];
        }
        for (size_t i = n - 1; i-- > 0;) {
            rhs[i] -= cprime_[i] * rhs[i + 1];
        }
    }

private:
    static void check_pivot(double piv, size_t row) {
        if (!(piv > 1e-300) && !(piv < -1e-300)) {
            throw NumericalError("tridiagonal solve: vanishing pivot at row " + std::to_string(row));
        }
    }

    std::vector<double> sub_;
    std::vector<double> cprime_;
    std::vector<double> inv_pivot_;
};

}  // namespace plankton
