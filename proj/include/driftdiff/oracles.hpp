// Independent references for the test suite: a dense fully-implicit Newton
// solver on tiny grids, quadrature of the Green kernel, and the analytic
// Neumann heat solution. Deliberately slow and free of the Picard /
// semi-implicit linearization choices of the main path.
#pragma once

#include <cmath>
#include <vector>

#include "driftdiff/solver.hpp"

namespace driftdiff {

struct NewtonOptions {
    double residual_tol = 1e-12;  // scaled by (1 + initial residual)
    int max_iterations = 100;
    double jacobian_step = 1e-7;  // relative
};

namespace detail {

// Oriented interior face: flux flows from cell `left` to cell `right`.
struct InteriorFace {
    std::size_t left;
    std::size_t right;
    double spacing;
    double face_len;
};

inline std::vector<InteriorFace> interior_faces(const Grid1D& g) {
    std::vector<InteriorFace> out;
    for (std::size_t f = 0; f + 1 < g.size(); ++f) out.push_back({f, f + 1, g.cell_width, 1.0});
    return out;
}

inline std::vector<InteriorFace> interior_faces(const Grid2D& g) {
    std::vector<InteriorFace> out;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i + 1 < g.nx) out.push_back({g.index(i, j), g.index(i + 1, j), g.hx, g.hy});
            if (j + 1 < g.ny) out.push_back({g.index(i, j), g.index(i, j + 1), g.hy, g.hx});
        }
    }
    return out;
}

}  // namespace detail

// One implicit-Euler step of the fully coupled nonlinear system (densities
// and potential self-consistent, sigma evaluated exactly) by damped Newton
// with a finite-difference Jacobian. Grid <= 32 cells, <= 3 species.
inline SystemState dense_newton_step(const System& sys, const SystemState& state, const StepParams& params,
                                     const NewtonOptions& opts = {}) {
    require(sys.n_cells() <= 32, "dense_newton_step: grid must have <= 32 cells");
    require(sys.species.size() <= 3, "dense_newton_step: <= 3 species");
    params.validate();

    const std::size_t n = sys.n_cells();
    const std::size_t ns = sys.species.size();
    const std::size_t dim = n * ns;
    const double vol = sys.two_dim ? sys.grid2.cell_volume() : sys.grid1.cell_width;
    const double dt = params.dt;
    const double t_new = state.t + dt;
    const auto faces = sys.two_dim ? boundary_faces(sys.grid2) : boundary_faces(sys.grid1);
    const auto inner = sys.two_dim ? detail::interior_faces(sys.grid2) : detail::interior_faces(sys.grid1);

    auto residual = [&](const std::vector<double>& x) {
        std::vector<std::vector<double>> u(ns);
        for (std::size_t s = 0; s < ns; ++s) {
            u[s].assign(x.begin() + s * n, x.begin() + (s + 1) * n);
        }
        const PotentialField V = sys.potential.apply(t_new, u);
        std::vector<double> r(dim, 0.0);
        for (std::size_t s = 0; s < ns; ++s) {
            const auto& sp = sys.species[s];
            const double m = sp.time_scale * vol / dt;
            for (std::size_t i = 0; i < n; ++i) {
                r[s * n + i] = m * (u[s][i] - state.densities[s][i]);
            }
            for (const auto& f : inner) {
                const double flux = f.face_len * sg_face_flux(u[s][f.left], u[s][f.right],
                                                              V.values[f.left] - V.values[f.right], f.spacing,
                                                              sp.diffusion, sp.alpha);
                r[s * n + f.left] += flux;   // leaves the left cell
                r[s * n + f.right] -= flux;  // enters the right cell
            }
            for (std::size_t f = 0; f < faces.size(); ++f) {
                const double sigma =
                    eval_flux(sp.flux, t_new, faces[f].point, u[s][faces[f].cell], V.boundary_trace[f]);
                r[s * n + faces[f].cell] -= sigma * faces[f].measure;  // inflow
            }
        }
        return r;
    };

    std::vector<double> x(dim);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t i = 0; i < n; ++i) x[s * n + i] = state.densities[s][i];
    }
    auto norm_inf = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double c : v) m = std::max(m, std::abs(c));
        return m;
    };
    std::vector<double> r = residual(x);
    const double tol = opts.residual_tol * (1.0 + norm_inf(r));

    for (int it = 0; it < opts.max_iterations; ++it) {
        const double rn = norm_inf(r);
        if (rn <= tol) break;
        std::vector<double> jac(dim * dim, 0.0);
        for (std::size_t jcol = 0; jcol < dim; ++jcol) {
            const double step = opts.jacobian_step * (1.0 + std::abs(x[jcol]));
            std::vector<double> xp = x;
            xp[jcol] += step;
            const std::vector<double> rp = residual(xp);
            for (std::size_t irow = 0; irow < dim; ++irow) {
                jac[irow * dim + jcol] = (rp[irow] - r[irow]) / step;
            }
        }
        std::vector<double> neg_r(dim);
        for (std::size_t i = 0; i < dim; ++i) neg_r[i] = -r[i];
        const std::vector<double> dx = dense_solve(std::move(jac), std::move(neg_r));

        double lambda = 1.0;
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            std::vector<double> xt = x;
            for (std::size_t i = 0; i < dim; ++i) xt[i] += lambda * dx[i];
            std::vector<double> rt = residual(xt);
            if (norm_inf(rt) < rn) {
                x = std::move(xt);
                r = std::move(rt);
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) throw SolverError("dense_newton_step: line search stalled (Newton divergence)");
        if (it + 1 == opts.max_iterations && norm_inf(r) > tol) {
            throw SolverError("dense_newton_step: Newton did not reach tolerance");
        }
    }

    SystemState out;
    out.t = t_new;
    out.step_index = state.step_index + 1;
    out.densities.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        out.densities[s].assign(x.begin() + s * n, x.begin() + (s + 1) * n);
    }
    out.potential = sys.potential.apply(t_new, out.densities);
    return out;
}

// Midpoint quadrature of V(x) = int G(x,y) rhs(y)/lambda dy plus the affine
// boundary part: the closed-form counterpart of the tridiagonal Robin solve.
inline PotentialField quadrature_poisson(const RobinPoissonSpec& spec, const Grid1D& grid,
                                         const std::vector<double>& rhs) {
    require(spec.sign_convention == RobinSign::PlusDerivative, "quadrature_poisson: PlusDerivative convention only");
    spec.validate();
    require(rhs.size() == grid.size(), "quadrature_poisson: rhs length mismatch");
    const double det = spec.determinant();
    const double h = grid.cell_width;
    PotentialField out;
    out.values.resize(grid.size());
    auto affine = [&](double x) { return (x - spec.A0) / det * (spec.V1 - spec.V0) + spec.V0; };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.cell_centers[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            acc += green_kernel(spec, x, grid.cell_centers[j]) * rhs[j] / spec.lambda * h;
        }
        out.values[i] = acc + affine(x);
    }
    double tr0 = affine(0.0), tr1 = affine(1.0);
    double d0 = (spec.V1 - spec.V0) / det, d1 = (spec.V1 - spec.V0) / det;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double y = grid.cell_centers[j];
        const double q = rhs[j] / spec.lambda * h;
        tr0 += spec.A0 * (1.0 + spec.A1 - y) / det * q;  // G(0, y)
        d0 += -(1.0 + spec.A1 - y) / det * q;            // dG/dx at x = 0 (y >= x branch)
        tr1 += spec.A1 * (spec.A0 - y) / det * q;        // G(1, y)
        d1 += -(spec.A0 - y) / det * q;                  // dG/dx at x = 1 (y <= x branch)
    }
    out.boundary_trace = {tr0, tr1};
    out.boundary_normal_derivative = {-d0, d1};
    return out;
}

// Exact Neumann heat solution on (0,1): sum_k a_k e^{-(k pi)^2 t} cos(k pi x),
// coefficients indexed by mode number (coeffs[0] is the mean).
inline double heat_neumann_analytic(double x, double t, const std::vector<double>& coeffs) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double kpi = static_cast<double>(k) * M_PI;
        acc += coeffs[k] * std::exp(-kpi * kpi * t) * std::cos(kpi * x);
    }
    return acc;
}

}  // namespace driftdiff
