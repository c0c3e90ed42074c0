// Nonlocal potential operators: closed-form Robin Poisson on the interval
// (direct tridiagonal solve, with the Green kernel kept as an independent
// cross-check) and the mollified Dirichlet Poisson on the rectangle.
#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <type_traits>
#include <vector>

#include "driftdiff/grid.hpp"
#include "driftdiff/linalg.hpp"
#include "driftdiff/smooth.hpp"

namespace driftdiff {

// Distinguishes (V + A_i dV)(boundary) = V_i from the corrosion model's
// (V - A_i dV)(boundary) = V_i.
enum class RobinSign { PlusDerivative, MinusDerivative };

struct RobinPoissonSpec {
    double A0 = 0.0;
    double A1 = 0.0;
    double V0 = 0.0;
    double V1 = 0.0;
    RobinSign sign_convention = RobinSign::PlusDerivative;
    double lambda = 1.0;                 // coefficient on d_xx V
    std::vector<double> charge_weights;  // beta^i (or gamma^i) per species
    double background = 0.0;             // zeta

    double sign_factor() const { return sign_convention == RobinSign::PlusDerivative ? 1.0 : -1.0; }

    // Homogeneous problem V = a + b x has b * determinant = 0, so the BVP is
    // well posed iff the determinant is nonzero. PlusDerivative: 1 + A1 - A0.
    double determinant() const { return 1.0 + sign_factor() * (A1 - A0); }

    void validate() const {
        require(lambda > 0.0, "RobinPoissonSpec: lambda must be > 0");
        require(std::abs(determinant()) > 1e-12, "RobinPoissonSpec: degenerate determinant");
    }
};

struct PotentialField {
    std::vector<double> values;                      // cell centers
    std::vector<double> boundary_trace;              // per boundary face
    std::vector<double> boundary_normal_derivative;  // dV/dnu, outward
};

// Green kernel of d_xx V = phi with (V + A_i dV) = 0 closures:
// G(x,y) = (1+A1-x)(A0-y)/(1+A1-A0) for y <= x, symmetric otherwise.
inline double green_kernel(const RobinPoissonSpec& spec, double x, double y) {
    require(spec.sign_convention == RobinSign::PlusDerivative, "green_kernel: PlusDerivative convention only");
    spec.validate();
    if (y > x) std::swap(x, y);
    return (1.0 + spec.A1 - x) * (spec.A0 - y) / (1.0 + spec.A1 - spec.A0);
}

// Solves lambda * d_xx V = rhs with Robin closures on cell centers. The
// boundary rows reconstruct the trace and one-sided derivative with the
// local curvature rhs/lambda folded in, which keeps the scheme exact on
// quadratics and the discrete Robin relation exact at the solution.
inline PotentialField solve_robin_poisson_1d(const RobinPoissonSpec& spec, const Grid1D& grid,
                                             const std::vector<double>& rhs) {
    spec.validate();
    require(rhs.size() == grid.size(), "solve_robin_poisson_1d: rhs length mismatch");
    for (double r : rhs) {
        if (std::isnan(r)) throw std::invalid_argument("solve_robin_poisson_1d: NaN in rhs");
    }
    const std::size_t n = grid.size();
    const double h = grid.cell_width;
    const double s = spec.sign_factor();
    const double c0 = rhs.front() / spec.lambda;
    const double c1 = rhs.back() / spec.lambda;

    std::vector<double> sub(n - 1, 0.0), diag(n, 0.0), super(n - 1, 0.0), b(n, 0.0);
    diag[0] = 1.5 - s * spec.A0 / h;
    super[0] = -0.5 + s * spec.A0 / h;
    b[0] = spec.V0 - 0.375 * c0 * h * h + s * spec.A0 * c0 * h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double w = spec.lambda / (h * h);
        sub[i - 1] = w;
        diag[i] = -2.0 * w;
        super[i] = w;
        b[i] = rhs[i];
    }
    sub[n - 2] = -0.5 - s * spec.A1 / h;
    diag[n - 1] = 1.5 + s * spec.A1 / h;
    b[n - 1] = spec.V1 - 0.375 * c1 * h * h - s * spec.A1 * c1 * h;

    PotentialField out;
    out.values = tridiag_solve_pivot(sub, diag, super, b);

    const double v0 = out.values[0], v1 = out.values[1];
    const double w1 = out.values[n - 1], w2 = out.values[n - 2];
    const double dleft = (v1 - v0) / h - c0 * h;    // dV/dx at x_left
    const double dright = (w1 - w2) / h + c1 * h;   // dV/dx at x_right
    out.boundary_trace = {(3.0 * v0 - v1) / 2.0 + 0.375 * c0 * h * h,
                          (3.0 * w1 - w2) / 2.0 + 0.375 * c1 * h * h};
    out.boundary_normal_derivative = {-dleft, dright};
    return out;
}

// Max-norm residual of the interior rows lambda * D2 V - rhs.
inline double robin_residual_max(const RobinPoissonSpec& spec, const Grid1D& grid, const std::vector<double>& rhs,
                                 const PotentialField& field) {
    const double h2 = grid.cell_width * grid.cell_width;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double lap = (field.values[i - 1] - 2.0 * field.values[i] + field.values[i + 1]) / h2;
        worst = std::max(worst, std::abs(spec.lambda * lap - rhs[i]));
    }
    return worst;
}

// --- mollifier --------------------------------------------------------------

// phi_p(x) = p^2 phi(p x) in two dimensions, with phi the normalized bump
// supported on |x| < 1, so every phi_p stays a probability density.
struct MollifierSpec {
    int p = 1;

    void validate() const { require(p >= 1, "MollifierSpec: p must be >= 1"); }
};

struct MollifierWeights {
    int radius_i = 0;
    int radius_j = 0;
    std::vector<double> w;  // (2*radius_i+1) x (2*radius_j+1), sums to 1

    double at(int di, int dj) const {
        return w[static_cast<std::size_t>(dj + radius_j) * (2 * radius_i + 1) + (di + radius_i)];
    }
};

inline MollifierWeights build_mollifier_weights(const Grid2D& grid, const MollifierSpec& moll) {
    moll.validate();
    const double r = 1.0 / moll.p;  // support radius of phi_p
    MollifierWeights mw;
    mw.radius_i = static_cast<int>(std::floor(r / grid.hx));
    mw.radius_j = static_cast<int>(std::floor(r / grid.hy));
    const int ni = 2 * mw.radius_i + 1, nj = 2 * mw.radius_j + 1;
    mw.w.assign(static_cast<std::size_t>(ni) * nj, 0.0);
    double sum = 0.0;
    for (int dj = -mw.radius_j; dj <= mw.radius_j; ++dj) {
        for (int di = -mw.radius_i; di <= mw.radius_i; ++di) {
            const double rad = std::hypot(di * grid.hx, dj * grid.hy) / r;
            const double val = bump_profile(rad);
            mw.w[static_cast<std::size_t>(dj + mw.radius_j) * ni + (di + mw.radius_i)] = val;
            sum += val;
        }
    }
    for (double& v : mw.w) v /= sum;
    return mw;
}

// (E u * phi_p)|_Omega with E the extension by zero: discrete convolution
// with nonnegative unit-mass weights, so signs propagate and the discrete
// L1 norm cannot grow.
inline std::vector<double> mollify_extend(const Grid2D& grid, const std::vector<double>& u,
                                          const MollifierWeights& mw) {
    require(u.size() == grid.size(), "mollify_extend: field length mismatch");
    std::vector<double> out(grid.size(), 0.0);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            double acc = 0.0;
            for (int dj = -mw.radius_j; dj <= mw.radius_j; ++dj) {
                const int jj = j - dj;
                if (jj < 0 || jj >= grid.ny) continue;
                for (int di = -mw.radius_i; di <= mw.radius_i; ++di) {
                    const int ii = i - di;
                    if (ii < 0 || ii >= grid.nx) continue;
                    acc += mw.at(di, dj) * u[grid.index(ii, jj)];
                }
            }
            out[grid.index(i, j)] = acc;
        }
    }
    return out;
}

inline std::vector<double> mollify_extend(const Grid2D& grid, const std::vector<double>& u,
                                          const MollifierSpec& moll) {
    return mollify_extend(grid, u, build_mollifier_weights(grid, moll));
}

// --- Dirichlet Poisson on the rectangle -------------------------------------

// 5-point Laplacian with the boundary value folded in through ghost cells
// (V_ghost = -V_cell gives V = 0 at the face midpoint). Applies the same
// closure the solver factorizes, for residual checks.
inline std::vector<double> apply_laplacian_2d(const Grid2D& grid, const std::vector<double>& v) {
    require(v.size() == grid.size(), "apply_laplacian_2d: field length mismatch");
    std::vector<double> out(grid.size(), 0.0);
    const double wx = 1.0 / (grid.hx * grid.hx), wy = 1.0 / (grid.hy * grid.hy);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double c = v[grid.index(i, j)];
            double acc = 0.0;
            acc += wx * ((i > 0 ? v[grid.index(i - 1, j)] : -c) - c);
            acc += wx * ((i + 1 < grid.nx ? v[grid.index(i + 1, j)] : -c) - c);
            acc += wy * ((j > 0 ? v[grid.index(i, j - 1)] : -c) - c);
            acc += wy * ((j + 1 < grid.ny ? v[grid.index(i, j + 1)] : -c) - c);
            out[grid.index(i, j)] = acc;
        }
    }
    return out;
}

// Deterministic direct solver for Delta V = rhs, V = 0 on the boundary.
// The matrix is factored once at construction and reused.
class DirichletPoisson2D {
  public:
    explicit DirichletPoisson2D(const Grid2D& grid)
        : grid_(grid), lu_(grid.size(), static_cast<std::size_t>(grid.nx)) {
        const double wx = 1.0 / (grid.hx * grid.hx), wy = 1.0 / (grid.hy * grid.hy);
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                const std::size_t k = grid.index(i, j);
                double diag = 0.0;
                // -Laplacian, so the factored matrix is an M-matrix.
                diag += (i > 0) ? wx : 2.0 * wx;
                diag += (i + 1 < grid.nx) ? wx : 2.0 * wx;
                diag += (j > 0) ? wy : 2.0 * wy;
                diag += (j + 1 < grid.ny) ? wy : 2.0 * wy;
                lu_.add(k, k, diag);
                if (i > 0) lu_.add(k, grid.index(i - 1, j), -wx);
                if (i + 1 < grid.nx) lu_.add(k, grid.index(i + 1, j), -wx);
                if (j > 0) lu_.add(k, grid.index(i, j - 1), -wy);
                if (j + 1 < grid.ny) lu_.add(k, grid.index(i, j + 1), -wy);
            }
        }
        lu_.factor();
    }

    const Grid2D& grid() const { return grid_; }

    PotentialField solve(const std::vector<double>& rhs) const {
        require(rhs.size() == grid_.size(), "DirichletPoisson2D: rhs length mismatch");
        for (double r : rhs) {
            if (!std::isfinite(r)) throw std::invalid_argument("DirichletPoisson2D: non-finite rhs");
        }
        std::vector<double> negated(rhs);
        for (double& r : negated) r = -r;
        PotentialField out;
        out.values = lu_.solve(std::move(negated));
        const auto faces = boundary_faces(grid_);
        out.boundary_trace.assign(faces.size(), 0.0);
        out.boundary_normal_derivative.resize(faces.size());
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const double v1 = out.values[faces[f].cell];
            const double v2 = out.values[faces[f].cell_next];
            // quadratic through (0, 0), (h/2, v1), (3h/2, v2), outward slope
            out.boundary_normal_derivative[f] = (v2 - 9.0 * v1) / (3.0 * faces[f].spacing);
        }
        return out;
    }

  private:
    Grid2D grid_;
    BandLU lu_;
};

inline PotentialField solve_dirichlet_poisson_2d(const Grid2D& grid, const std::vector<double>& rhs) {
    return DirichletPoisson2D(grid).solve(rhs);
}

// --- dispatching operator V = B(t, u) ---------------------------------------

enum class PotentialKind { None, Robin1D, MollifiedDirichlet2D };

class PotentialOperator {
  public:
    static PotentialOperator none(std::size_t n_cells, std::size_t n_boundary_faces = 2) {
        PotentialOperator op;
        op.kind_ = PotentialKind::None;
        op.n_cells_ = n_cells;
        op.n_faces_ = n_boundary_faces;
        return op;
    }

    // charge_sign = +1 solves lambda d_xx V = +(sum_i w_i u^i + zeta)
    // (the generic drift model); charge_sign = -1 flips the right-hand side
    // as in the corrosion model's -lambda d_xx V = sum_i gamma^i u^i + zeta.
    static PotentialOperator robin_1d(const Grid1D& grid, RobinPoissonSpec spec, double charge_sign) {
        spec.validate();
        require(std::abs(charge_sign) == 1.0, "PotentialOperator: charge_sign must be +-1");
        PotentialOperator op;
        op.kind_ = PotentialKind::Robin1D;
        op.grid1_ = grid;
        op.rspec_ = std::move(spec);
        op.charge_sign_ = charge_sign;
        op.n_cells_ = grid.size();
        return op;
    }

    static PotentialOperator mollified_dirichlet_2d(const Grid2D& grid, MollifierSpec moll,
                                                    std::vector<double> charge_weights, double background = 0.0) {
        moll.validate();
        PotentialOperator op;
        op.kind_ = PotentialKind::MollifiedDirichlet2D;
        op.grid2_ = grid;
        op.moll_ = moll;
        op.weights_ = build_mollifier_weights(grid, moll);
        op.dirichlet_ = std::make_shared<DirichletPoisson2D>(grid);
        op.rspec_.charge_weights = std::move(charge_weights);
        op.rspec_.background = background;
        op.n_cells_ = grid.size();
        return op;
    }

    PotentialKind kind() const { return kind_; }
    const RobinPoissonSpec& robin_spec() const { return rspec_; }
    const MollifierSpec& mollifier() const { return moll_; }

    std::vector<double> assemble_rhs(const std::vector<std::vector<double>>& densities) const {
        std::vector<double> rhs(n_cells_, rspec_.background);
        const auto& w = rspec_.charge_weights;
        require(w.size() == densities.size(), "PotentialOperator: charge weight count mismatch");
        for (std::size_t s = 0; s < densities.size(); ++s) {
            require(densities[s].size() == n_cells_, "PotentialOperator: density length mismatch");
            for (std::size_t i = 0; i < n_cells_; ++i) rhs[i] += w[s] * densities[s][i];
        }
        if (charge_sign_ < 0.0) {
            for (double& r : rhs) r = -r;
        }
        return rhs;
    }

    PotentialField apply(double /*t*/, const std::vector<std::vector<double>>& densities) const {
        switch (kind_) {
            case PotentialKind::None: {
                PotentialField f;
                f.values.assign(n_cells_, 0.0);
                f.boundary_trace.assign(n_faces_, 0.0);
                f.boundary_normal_derivative.assign(n_faces_, 0.0);
                return f;
            }
            case PotentialKind::Robin1D:
                return solve_robin_poisson_1d(rspec_, grid1_, assemble_rhs(densities));
            case PotentialKind::MollifiedDirichlet2D: {
                const auto rhs = assemble_rhs(densities);
                return dirichlet_->solve(mollify_extend(grid2_, rhs, weights_));
            }
        }
        throw SolverError("PotentialOperator: unknown kind");
    }

  private:
    PotentialKind kind_ = PotentialKind::None;
    std::size_t n_cells_ = 0;
    std::size_t n_faces_ = 2;
    Grid1D grid1_;
    Grid2D grid2_;
    RobinPoissonSpec rspec_;
    double charge_sign_ = 1.0;
    MollifierSpec moll_;
    MollifierWeights weights_;
    std::shared_ptr<const DirichletPoisson2D> dirichlet_;
};

inline PotentialField apply_potential_operator(const PotentialOperator& op, double t,
                                               const std::vector<std::vector<double>>& densities) {
    return op.apply(t, densities);
}

// Discrete W^{1,inf} distance used by the (A-1) surrogate: max value gap
// plus max face-gradient gap.
inline double w1inf_distance_1d(const Grid1D& grid, const PotentialField& a, const PotentialField& b) {
    double dv = 0.0, dg = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) dv = std::max(dv, std::abs(a.values[i] - b.values[i]));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double ga = (a.values[i + 1] - a.values[i]) / grid.cell_width;
        const double gb = (b.values[i + 1] - b.values[i]) / grid.cell_width;
        dg = std::max(dg, std::abs(ga - gb));
    }
    return dv + dg;
}

inline double w1inf_distance_2d(const Grid2D& grid, const PotentialField& a, const PotentialField& b) {
    double dv = 0.0, dg = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) dv = std::max(dv, std::abs(a.values[k] - b.values[k]));
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i + 1 < grid.nx) {
                const double ga = (a.values[grid.index(i + 1, j)] - a.values[grid.index(i, j)]) / grid.hx;
                const double gb = (b.values[grid.index(i + 1, j)] - b.values[grid.index(i, j)]) / grid.hx;
                dg = std::max(dg, std::abs(ga - gb));
            }
            if (j + 1 < grid.ny) {
                const double ga = (a.values[grid.index(i, j + 1)] - a.values[grid.index(i, j)]) / grid.hy;
                const double gb = (b.values[grid.index(i, j + 1)] - b.values[grid.index(i, j)]) / grid.hy;
                dg = std::max(dg, std::abs(ga - gb));
            }
        }
    }
    return dv + dg;
}

struct LipschitzSurrogate {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    int pairs = 0;
};

// Measured discrete surrogate of the (A-1) constant: ratio of the W^{1,inf}
// distance of potentials to the L1 distance of densities over random
// nonnegative pairs. Empirical only; no claim on the continuum constant.
template <class GridT>
LipschitzSurrogate measure_potential_lipschitz(const PotentialOperator& op, const GridT& grid, std::size_t n_species,
                                               int n_pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LipschitzSurrogate out;
    double sum = 0.0;
    for (int it = 0; it < n_pairs; ++it) {
        std::vector<std::vector<double>> u(n_species), ub(n_species);
        double l1 = 0.0;
        for (std::size_t s = 0; s < n_species; ++s) {
            u[s].resize(grid.size());
            ub[s].resize(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                u[s][i] = unit(rng);
                ub[s][i] = unit(rng);
            }
        }
        for (std::size_t s = 0; s < n_species; ++s) {
            std::vector<double> diff(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = std::abs(u[s][i] - ub[s][i]);
            l1 += cell_integral(grid, diff);
        }
        if (l1 < 1e-14) continue;
        const auto va = op.apply(0.0, u);
        const auto vb = op.apply(0.0, ub);
        double dist = 0.0;
        if constexpr (std::is_same_v<GridT, Grid1D>) {
            dist = w1inf_distance_1d(grid, va, vb);
        } else {
            dist = w1inf_distance_2d(grid, va, vb);
        }
        const double ratio = dist / l1;
        out.max_ratio = std::max(out.max_ratio, ratio);
        sum += ratio;
        ++out.pairs;
    }
    if (out.pairs > 0) out.mean_ratio = sum / out.pairs;
    return out;
}

}  // namespace driftdiff
