// Small direct solvers used by the discrete operators.
//
// Invariant the species updates rely on: for an M-matrix (positive diagonal,
// nonpositive off-diagonals) with a nonnegative right-hand side, no-pivot
// elimination and substitution only ever add nonnegative quantities, so the
// computed solution is nonnegative in floating point, not just up to
// roundoff. Adding pivoting to those paths breaks the sign guarantee.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftdiff {

class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thomas algorithm, no pivoting. sub[i] = A(i+1,i), diag[i] = A(i,i),
// super[i] = A(i,i+1). Stable for (column-)diagonally dominant systems.
inline std::vector<double> tridiag_solve_nopivot(std::vector<double> sub,
                                                 std::vector<double> diag,
                                                 std::vector<double> super,
                                                 std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw SolverError("tridiag: empty system");
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw SolverError("tridiag: zero pivot");
        const double w = sub[i - 1] / diag[i - 1];
        diag[i] -= w * super[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (diag[n - 1] == 0.0) throw SolverError("tridiag: zero pivot");
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
    }
    return x;
}

// Tridiagonal solve with partial pivoting (gtsv-style, one fill diagonal).
// Used for the Robin-Poisson closures, whose boundary rows are not
// diagonally dominant for arbitrary boundary coefficients.
inline std::vector<double> tridiag_solve_pivot(std::vector<double> sub,
                                               std::vector<double> diag,
                                               std::vector<double> super,
                                               std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw SolverError("tridiag: empty system");
    std::vector<double> fill(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double sb = sub[i];
        if (std::abs(diag[i]) >= std::abs(sb)) {
            if (diag[i] == 0.0) throw SolverError("tridiag: singular system");
            const double m = sb / diag[i];
            diag[i + 1] -= m * super[i];
            rhs[i + 1] -= m * rhs[i];
        } else {
            const double m = diag[i] / sb;
            diag[i] = sb;
            const double tmp_diag = diag[i + 1];
            diag[i + 1] = super[i] - m * tmp_diag;
            super[i] = tmp_diag;
            if (i + 2 < n) {
                fill[i] = super[i + 1];
                super[i + 1] = -m * fill[i];
            }
            const double tb = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = tb - m * rhs[i];
        }
    }
    if (diag[n - 1] == 0.0) throw SolverError("tridiag: singular system");
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    if (n >= 2) x[n - 2] = (rhs[n - 2] - super[n - 2] * x[n - 1]) / diag[n - 2];
    for (std::size_t k = n; k-- > 0;) {
        if (k + 2 >= n) continue;
        x[k] = (rhs[k] - super[k] * x[k + 1] - fill[k] * x[k + 2]) / diag[k];
    }
    return x;
}

// Banded LU without pivoting, column-major band storage as in LAPACK's gbtrf
// (without the pivot rows). Factor once, solve many times.
class BandLU {
  public:
    BandLU() = default;

    // entries: (row, col, value) triplets with |row - col| <= bandwidth.
    BandLU(std::size_t n, std::size_t bandwidth) : n_(n), b_(bandwidth), data_((2 * bandwidth + 1) * n, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data_[j * (2 * b_ + 1) + (i - j + b_)]; }
    double at(std::size_t i, std::size_t j) const { return data_[j * (2 * b_ + 1) + (i - j + b_)]; }

    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    void factor() {
        for (std::size_t k = 0; k < n_; ++k) {
            const double piv = at(k, k);
            if (piv == 0.0) throw SolverError("band LU: zero pivot");
            const std::size_t iend = std::min(k + b_, n_ - 1);
            for (std::size_t i = k + 1; i <= iend; ++i) {
                const double m = at(i, k) / piv;
                at(i, k) = m;
                if (m == 0.0) continue;
                const std::size_t jend = std::min(k + b_, n_ - 1);
                for (std::size_t j = k + 1; j <= jend; ++j) {
                    at(i, j) -= m * at(k, j);
                }
            }
        }
        factored_ = true;
    }

    std::vector<double> solve(std::vector<double> rhs) const {
        if (!factored_) throw SolverError("band LU: solve before factor");
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t iend = std::min(k + b_, n_ - 1);
            for (std::size_t i = k + 1; i <= iend; ++i) {
                rhs[i] -= at(i, k) * rhs[k];
            }
        }
        std::vector<double> x(n_);
        for (std::size_t k = n_; k-- > 0;) {
            double acc = rhs[k];
            const std::size_t jend = std::min(k + b_, n_ - 1);
            for (std::size_t j = k + 1; j <= jend; ++j) {
                acc -= at(k, j) * x[j];
            }
            x[k] = acc / at(k, k);
        }
        return x;
    }

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return b_; }

  private:
    std::size_t n_ = 0;
    std::size_t b_ = 0;
    std::vector<double> data_;
    bool factored_ = false;
};

// Dense LU with partial pivoting, for the small fully-coupled Newton systems.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    if (a.size() != n * n) throw SolverError("dense solve: shape mismatch");
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = std::abs(a[i * n + k]);
            if (m > best) {
                best = m;
                p = i;
            }
        }
        if (best == 0.0) throw SolverError("dense solve: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(rhs[k], rhs[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] / a[k * n + k];
            a[i * n + k] = 0.0;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
            rhs[i] -= m * rhs[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double acc = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= a[k * n + j] * x[j];
        x[k] = acc / a[k * n + k];
    }
    return x;
}

}  // namespace driftdiff
