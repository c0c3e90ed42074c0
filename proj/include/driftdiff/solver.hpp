// Positivity-preserving finite-volume discretization of
//   tau_i du^i/dt = div(eta_i grad u^i + alpha_i u^i grad V)
// with Scharfetter-Gummel face fluxes, Robin flux boundary closure and a
// lagged-potential Picard outer loop (implicit Euler in time).
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "driftdiff/flux.hpp"
#include "driftdiff/grid.hpp"
#include "driftdiff/linalg.hpp"
#include "driftdiff/potential.hpp"

namespace driftdiff {

// Bernoulli function z / (e^z - 1) with the removable singularity at 0.
inline double bernoulli(double z) {
    if (z == 0.0) return 1.0;
    const double d = std::expm1(z);
    if (std::isinf(d)) return 0.0;
    return z / d;
}

// Scharfetter-Gummel face flux in the direction left -> right:
//   F = (eta/h) [B(-z) u_left - B(z) u_right],   z = alpha * dV / eta,
// where dV = V_left - V_right is the potential drop across the face.
// At z = 0 this is central diffusion; it vanishes exactly on discrete
// thermal-equilibrium profiles u ~ exp(-alpha V / eta).
inline double sg_face_flux(double u_left, double u_right, double dV, double h, double eta = 1.0,
                           double alpha = 1.0) {
    require(h > 0.0, "sg_face_flux: h must be > 0");
    const double z = alpha * dV / eta;
    return (eta / h) * (bernoulli(-z) * u_left - bernoulli(z) * u_right);
}

struct SpeciesSpec {
    std::string name;
    double alpha = 0.0;       // drift coefficient
    double diffusion = 1.0;   // eta > 0
    double time_scale = 1.0;  // tau > 0 (corrosion: eps^{2-i})
    FluxSpec flux;
    std::vector<double> initial_condition;

    void validate(std::size_t n_cells) const {
        require(diffusion > 0.0, "SpeciesSpec '" + name + "': diffusion must be > 0");
        require(time_scale > 0.0, "SpeciesSpec '" + name + "': time_scale must be > 0");
        require(initial_condition.size() == n_cells, "SpeciesSpec '" + name + "': initial condition length mismatch");
        for (double v : initial_condition) {
            require(std::isfinite(v), "SpeciesSpec '" + name + "': non-finite initial condition");
            require(v >= 0.0, "SpeciesSpec '" + name + "': initial condition must be nonnegative");
        }
    }
};

struct StepParams {
    double dt = 1e-2;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    double theta = 1.0;  // implicit Euler only

    void validate() const {
        require(dt > 0.0, "StepParams: dt must be > 0");
        require(picard_tol > 0.0, "StepParams: picard_tol must be > 0");
        require(picard_max_iter >= 1, "StepParams: picard_max_iter must be >= 1");
        require(theta == 1.0, "StepParams: only implicit Euler (theta = 1) is supported");
    }
};

struct SystemState {
    double t = 0.0;
    int step_index = 0;
    std::vector<std::vector<double>> densities;
    PotentialField potential;
};

enum class ModelKind { HeatNeumann1D, Corrosion1D, GenericDrift1D, SelfGrav2D };

struct System {
    ModelKind kind = ModelKind::HeatNeumann1D;
    bool two_dim = false;
    Grid1D grid1;
    Grid2D grid2;
    std::vector<SpeciesSpec> species;
    PotentialOperator potential;

    std::size_t n_cells() const { return two_dim ? grid2.size() : grid1.size(); }

    void validate() const {
        require(!species.empty(), "System: at least one species required");
        const double dim = two_dim ? 2.0 : 1.0;
        for (const auto& s : species) {
            s.validate(n_cells());
            require(s.flux.growth_exponent < 1.0 + 2.0 / dim,
                    "SpeciesSpec '" + s.name + "': growth exponent violates rho < 1 + 2/d");
        }
    }
};

inline SystemState make_initial_state(const System& sys) {
    SystemState st;
    st.t = 0.0;
    st.step_index = 0;
    for (const auto& s : sys.species) st.densities.push_back(s.initial_condition);
    st.potential = sys.potential.apply(0.0, st.densities);
    return st;
}

struct SpeciesStepStats {
    double boundary_flux_integral = 0.0;  // sum of applied sigma * face measure
    double mass_before = 0.0;
    double mass_after = 0.0;
    double mass_residual = 0.0;    // tau * dmass - dt * flux integral
    double energy_lhs = 0.0;       // 1/2 d||u||_2^2 + 1/2 ||du||_2^2 + (dt/tau) eta ||grad u||^2
    double energy_drift = 0.0;     // (dt/tau) * SG drift remainder work
    double energy_boundary = 0.0;  // (dt/tau) * sum sigma u_b
    double energy_residual = 0.0;  // relative defect of the discrete balance
    double min_value = 0.0;
};

struct StepReport {
    int picard_iterations = 0;
    std::vector<SpeciesStepStats> species;
};

inline double mass_budget(double mass_before, double mass_after, double boundary_flux_integral, double dt,
                          double tau) {
    return tau * (mass_after - mass_before) - dt * boundary_flux_integral;
}

namespace detail {

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// One implicit-Euler solve for a single species on the interval, with the
// potential frozen and sigma linearized about vstar at each boundary face.
inline std::vector<double> solve_species_1d(const Grid1D& grid, const SpeciesSpec& sp,
                                            const std::vector<double>& u_old, const PotentialField& V,
                                            const std::vector<double>& vstar, double t_new, double dt) {
    const std::size_t n = grid.size();
    const double h = grid.cell_width;
    const double eta = sp.diffusion;
    const double w = eta / h;
    const double m = sp.time_scale * h / dt;

    std::vector<double> sub(n - 1), diag(n, m), super(n - 1), b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = m * u_old[i];
    for (std::size_t f = 0; f + 1 < n; ++f) {
        const double z = sp.alpha * (V.values[f] - V.values[f + 1]) / eta;
        const double bm = bernoulli(-z), bp = bernoulli(z);
        // face f+1/2: F = w (bm u_f - bp u_{f+1})
        diag[f] += w * bm;
        super[f] = -w * bp;
        sub[f] = -w * bm;
        diag[f + 1] += w * bp;
    }
    const auto faces = boundary_faces(grid);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const double psi = V.boundary_trace[f];
        const double sigma = eval_flux(sp.flux, t_new, faces[f].point, vstar[f], psi);
        const double slope = flux_slope_v(sp.flux, t_new, faces[f].point, vstar[f], psi);
        const std::size_t c = faces[f].cell;
        diag[c] -= slope * faces[f].measure;
        b[c] += (sigma - slope * vstar[f]) * faces[f].measure;
    }
    return tridiag_solve_nopivot(sub, diag, super, b);
}

inline std::vector<double> solve_species_2d(const Grid2D& grid, const SpeciesSpec& sp,
                                            const std::vector<double>& u_old, const PotentialField& V,
                                            const std::vector<double>& vstar, double t_new, double dt) {
    const std::size_t n = grid.size();
    const double eta = sp.diffusion;
    const double m = sp.time_scale * grid.cell_volume() / dt;
    BandLU A(n, static_cast<std::size_t>(grid.nx));
    std::vector<double> b(n);
    for (std::size_t k = 0; k < n; ++k) {
        A.add(k, k, m);
        b[k] = m * u_old[k];
    }
    auto couple = [&](std::size_t left, std::size_t right, double spacing, double face_len) {
        const double z = sp.alpha * (V.values[left] - V.values[right]) / eta;
        const double w = face_len * eta / spacing;
        const double bm = bernoulli(-z), bp = bernoulli(z);
        A.add(left, left, w * bm);
        A.add(left, right, -w * bp);
        A.add(right, left, -w * bm);
        A.add(right, right, w * bp);
    };
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i + 1 < grid.nx) couple(grid.index(i, j), grid.index(i + 1, j), grid.hx, grid.hy);
            if (j + 1 < grid.ny) couple(grid.index(i, j), grid.index(i, j + 1), grid.hy, grid.hx);
        }
    }
    const auto faces = boundary_faces(grid);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const double psi = V.boundary_trace[f];
        const double sigma = eval_flux(sp.flux, t_new, faces[f].point, vstar[f], psi);
        const double slope = flux_slope_v(sp.flux, t_new, faces[f].point, vstar[f], psi);
        A.add(faces[f].cell, faces[f].cell, -slope * faces[f].measure);
        b[faces[f].cell] += (sigma - slope * vstar[f]) * faces[f].measure;
    }
    A.factor();
    return A.solve(std::move(b));
}

struct EnergyTerms {
    double grad_work = 0.0;   // eta * sum_faces (du)^2 / spacing * face_len
    double drift_work = 0.0;  // SG remainder work
};

inline EnergyTerms energy_face_terms_1d(const Grid1D& grid, const SpeciesSpec& sp, const std::vector<double>& u,
                                        const PotentialField& V) {
    EnergyTerms e;
    const double h = grid.cell_width;
    const double eta = sp.diffusion;
    for (std::size_t f = 0; f + 1 < grid.size(); ++f) {
        const double du = u[f + 1] - u[f];
        const double z = sp.alpha * (V.values[f] - V.values[f + 1]) / eta;
        e.grad_work += eta * du * du / h;
        e.drift_work += (eta / h) * ((bernoulli(-z) - 1.0) * u[f] - (bernoulli(z) - 1.0) * u[f + 1]) * du;
    }
    return e;
}

inline EnergyTerms energy_face_terms_2d(const Grid2D& grid, const SpeciesSpec& sp, const std::vector<double>& u,
                                        const PotentialField& V) {
    EnergyTerms e;
    const double eta = sp.diffusion;
    auto face = [&](std::size_t left, std::size_t right, double spacing, double face_len) {
        const double du = u[right] - u[left];
        const double z = sp.alpha * (V.values[left] - V.values[right]) / eta;
        e.grad_work += face_len * eta * du * du / spacing;
        e.drift_work += (face_len * eta / spacing) *
                        ((bernoulli(-z) - 1.0) * u[left] - (bernoulli(z) - 1.0) * u[right]) * du;
    };
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i + 1 < grid.nx) face(grid.index(i, j), grid.index(i + 1, j), grid.hx, grid.hy);
            if (j + 1 < grid.ny) face(grid.index(i, j), grid.index(i, j + 1), grid.hy, grid.hx);
        }
    }
    return e;
}

}  // namespace detail

// One implicit-Euler step of the whole coupled system. The outer Picard loop
// refreshes V = B(u) and the boundary linearization point until the max-norm
// change of both u and V drops below picard_tol.
inline std::pair<SystemState, StepReport> assemble_step(const System& sys, const SystemState& state,
                                                        const StepParams& params) {
    params.validate();
    const double dt = params.dt;
    const double t_new = state.t + dt;
    const std::size_t ns = sys.species.size();
    const std::size_t n = sys.n_cells();

    const auto faces = sys.two_dim ? boundary_faces(sys.grid2) : boundary_faces(sys.grid1);
    auto boundary_values = [&](const std::vector<double>& u) {
        std::vector<double> out(faces.size());
        for (std::size_t f = 0; f < faces.size(); ++f) out[f] = u[faces[f].cell];
        return out;
    };

    PotentialField V = sys.potential.apply(t_new, state.densities);
    std::vector<std::vector<double>> vstar(ns), u_prev = state.densities, u_next(ns);
    for (std::size_t s = 0; s < ns; ++s) vstar[s] = boundary_values(state.densities[s]);

    PotentialField V_used;
    std::vector<std::vector<double>> vstar_used;
    int iterations = 0;
    bool converged = false;
    while (iterations < params.picard_max_iter) {
        ++iterations;
        for (std::size_t s = 0; s < ns; ++s) {
            u_next[s] = sys.two_dim
                            ? detail::solve_species_2d(sys.grid2, sys.species[s], state.densities[s], V, vstar[s],
                                                       t_new, dt)
                            : detail::solve_species_1d(sys.grid1, sys.species[s], state.densities[s], V, vstar[s],
                                                       t_new, dt);
            for (double v : u_next[s]) {
                if (!std::isfinite(v)) throw SolverError("assemble_step: non-finite density update");
            }
        }
        PotentialField V_next = sys.potential.apply(t_new, u_next);
        double delta = detail::max_abs_diff(V_next.values, V.values);
        for (std::size_t s = 0; s < ns; ++s) delta = std::max(delta, detail::max_abs_diff(u_next[s], u_prev[s]));
        V_used = V;
        vstar_used = vstar;
        u_prev = u_next;
        V = std::move(V_next);
        for (std::size_t s = 0; s < ns; ++s) vstar[s] = boundary_values(u_next[s]);
        if (delta < params.picard_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw SolverError("assemble_step: Picard iteration did not converge in " +
                          std::to_string(params.picard_max_iter) + " iterations");
    }

    SystemState out;
    out.t = t_new;
    out.step_index = state.step_index + 1;
    out.densities = std::move(u_next);
    out.potential = std::move(V);

    StepReport report;
    report.picard_iterations = iterations;
    report.species.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        const auto& sp = sys.species[s];
        auto& st = report.species[s];
        const auto& u_new = out.densities[s];
        const auto& u_old = state.densities[s];

        double flux_integral = 0.0, boundary_work = 0.0;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const double psi = V_used.boundary_trace[f];
            const double v0 = vstar_used[s][f];
            const double sigma0 = eval_flux(sp.flux, t_new, faces[f].point, v0, psi);
            const double slope = flux_slope_v(sp.flux, t_new, faces[f].point, v0, psi);
            const double ub = u_new[faces[f].cell];
            const double applied = sigma0 + slope * (ub - v0);  // the sigma the linear solve used
            flux_integral += applied * faces[f].measure;
            boundary_work += applied * ub * faces[f].measure;
        }
        st.boundary_flux_integral = flux_integral;

        const double vol = sys.two_dim ? sys.grid2.cell_volume() : sys.grid1.cell_width;
        double m0 = 0.0, m1 = 0.0, l2n = 0.0, l2o = 0.0, l2d = 0.0, mn = u_new[0];
        for (std::size_t i = 0; i < n; ++i) {
            m0 += u_old[i];
            m1 += u_new[i];
            l2n += u_new[i] * u_new[i];
            l2o += u_old[i] * u_old[i];
            const double d = u_new[i] - u_old[i];
            l2d += d * d;
            mn = std::min(mn, u_new[i]);
        }
        st.mass_before = m0 * vol;
        st.mass_after = m1 * vol;
        st.min_value = mn;
        st.mass_residual = mass_budget(st.mass_before, st.mass_after, flux_integral, dt, sp.time_scale);

        const auto terms = sys.two_dim ? detail::energy_face_terms_2d(sys.grid2, sp, u_new, V_used)
                                       : detail::energy_face_terms_1d(sys.grid1, sp, u_new, V_used);
        const double r = dt / sp.time_scale;
        st.energy_lhs = 0.5 * vol * (l2n - l2o) + 0.5 * vol * l2d + r * terms.grad_work;
        st.energy_drift = r * terms.drift_work;
        st.energy_boundary = r * boundary_work;
        const double scale = std::abs(0.5 * vol * l2n) + std::abs(r * terms.grad_work) +
                             std::abs(st.energy_drift) + std::abs(st.energy_boundary) + 1e-30;
        st.energy_residual = std::abs(st.energy_lhs - st.energy_drift - st.energy_boundary) / scale;
    }
    return {std::move(out), std::move(report)};
}

}  // namespace driftdiff
