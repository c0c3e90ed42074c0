// Per-step norms, budgets and invariant flags: the discrete counterparts of
// the a-priori L1/L2 estimates (negative part, above-height excess, Gronwall
// envelopes, Gagliardo-Nirenberg smallness threshold).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "driftdiff/solver.hpp"

namespace driftdiff {

enum class DiagnosticFlag { NegativityViolation, EnergyViolation, BudgetViolation, PicardFail };

inline const char* flag_name(DiagnosticFlag f) {
    switch (f) {
        case DiagnosticFlag::NegativityViolation: return "NegativityViolation";
        case DiagnosticFlag::EnergyViolation: return "EnergyViolation";
        case DiagnosticFlag::BudgetViolation: return "BudgetViolation";
        case DiagnosticFlag::PicardFail: return "PicardFail";
    }
    return "?";
}

struct DiagnosticThresholds {
    double negativity = -1e-12;   // min cell value below this flags
    double budget_rel = 1e-10;    // |residual| > budget_rel * (1 + mass) flags
    double energy_rel = 1e-8;     // relative energy-balance defect
};

struct SpeciesDiagnostics {
    std::string name;
    double l1_norm = 0.0;
    double l2_norm = 0.0;
    double min_value = 0.0;
    double negative_part_l1 = 0.0;
    double above_height_l1 = 0.0;  // ||(u - k)+||_1 with k from the flux spec
    double mass = 0.0;
    double mass_residual = 0.0;
    double flux_integral = 0.0;
    // indicator-weighted potential integrals entering the above-height
    // estimate; recorded as-is, no threshold (the constants multiplying them
    // are not known)
    double above_k_laplacian_v = 0.0;  // sum over u > k of lap(V) * vol
    double above_k_outflux_v = 0.0;    // sum over boundary faces with u_b > k of dV/dnu * measure
};

struct PotentialDiagnostics {
    double w1inf_norm = 0.0;
    double boundary_trace_max = 0.0;
    double w21_seminorm_l1 = 0.0;  // L1 norm of discrete second differences (report only)
};

struct DiagnosticsRecord {
    double t = 0.0;
    int step_index = 0;
    int picard_iterations = 0;
    std::vector<SpeciesDiagnostics> species;
    PotentialDiagnostics potential;
    double mass_budget_residual = 0.0;     // max |residual| across species
    double energy_balance_residual = 0.0;  // max relative defect across species
    std::vector<DiagnosticFlag> flags;

    bool has_flag(DiagnosticFlag f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
    bool passing() const { return flags.empty(); }
};

namespace detail {

template <class GridT>
void species_norms(const GridT& grid, const std::vector<double>& u, double height, SpeciesDiagnostics& out) {
    const double vol = grid.cell_volume();
    double l1 = 0.0, l2 = 0.0, neg = 0.0, above = 0.0, mn = u.empty() ? 0.0 : u[0];
    for (double v : u) {
        l1 += std::abs(v);
        l2 += v * v;
        neg += std::max(-v, 0.0);
        above += std::max(v - height, 0.0);
        mn = std::min(mn, v);
    }
    out.l1_norm = l1 * vol;
    out.l2_norm = std::sqrt(l2 * vol);
    out.negative_part_l1 = neg * vol;
    out.above_height_l1 = above * vol;
    out.min_value = mn;
}

inline PotentialDiagnostics potential_norms(const System& sys, const PotentialField& V) {
    PotentialDiagnostics out;
    double vmax = 0.0, gmax = 0.0, w21 = 0.0;
    for (double v : V.values) vmax = std::max(vmax, std::abs(v));
    for (double d : V.boundary_normal_derivative) gmax = std::max(gmax, std::abs(d));
    for (double tr : V.boundary_trace) out.boundary_trace_max = std::max(out.boundary_trace_max, std::abs(tr));
    if (!sys.two_dim) {
        const auto& g = sys.grid1;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            gmax = std::max(gmax, std::abs(V.values[i + 1] - V.values[i]) / g.cell_width);
        }
        for (std::size_t i = 1; i + 1 < g.size(); ++i) {
            w21 += std::abs(V.values[i - 1] - 2.0 * V.values[i] + V.values[i + 1]) / g.cell_width;
        }
    } else {
        const auto& g = sys.grid2;
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const double c = V.values[g.index(i, j)];
                if (i + 1 < g.nx) gmax = std::max(gmax, std::abs(V.values[g.index(i + 1, j)] - c) / g.hx);
                if (j + 1 < g.ny) gmax = std::max(gmax, std::abs(V.values[g.index(i, j + 1)] - c) / g.hy);
                double acc = 0.0;
                if (i > 0 && i + 1 < g.nx) {
                    acc += std::abs(V.values[g.index(i - 1, j)] - 2.0 * c + V.values[g.index(i + 1, j)]) /
                           (g.hx * g.hx);
                }
                if (j > 0 && j + 1 < g.ny) {
                    acc += std::abs(V.values[g.index(i, j - 1)] - 2.0 * c + V.values[g.index(i, j + 1)]) /
                           (g.hy * g.hy);
                }
                w21 += acc * g.cell_volume();
            }
        }
    }
    out.w1inf_norm = vmax + gmax;
    out.w21_seminorm_l1 = w21;
    return out;
}

// Indicator-weighted integrals of the potential over the region where the
// density exceeds the flux height.
inline void above_height_potential_work(const System& sys, const std::vector<double>& u, double height,
                                        const PotentialField& V, SpeciesDiagnostics& out) {
    double lap_work = 0.0, boundary_work = 0.0;
    if (!sys.two_dim) {
        const auto& g = sys.grid1;
        const double h2 = g.cell_width * g.cell_width;
        for (std::size_t i = 1; i + 1 < g.size(); ++i) {
            if (u[i] > height) {
                lap_work += (V.values[i - 1] - 2.0 * V.values[i] + V.values[i + 1]) / h2 * g.cell_width;
            }
        }
        const auto faces = boundary_faces(g);
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (u[faces[f].cell] > height) {
                boundary_work += V.boundary_normal_derivative[f] * faces[f].measure;
            }
        }
    } else {
        const auto& g = sys.grid2;
        for (int j = 1; j + 1 < g.ny; ++j) {
            for (int i = 1; i + 1 < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                if (u[k] <= height) continue;
                const double lap =
                    (V.values[g.index(i - 1, j)] - 2.0 * V.values[k] + V.values[g.index(i + 1, j)]) / (g.hx * g.hx) +
                    (V.values[g.index(i, j - 1)] - 2.0 * V.values[k] + V.values[g.index(i, j + 1)]) / (g.hy * g.hy);
                lap_work += lap * g.cell_volume();
            }
        }
        const auto faces = boundary_faces(g);
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (u[faces[f].cell] > height) {
                boundary_work += V.boundary_normal_derivative[f] * faces[f].measure;
            }
        }
    }
    out.above_k_laplacian_v = lap_work;
    out.above_k_outflux_v = boundary_work;
}

}  // namespace detail

// Pure: same states and step report always produce the same record.
inline DiagnosticsRecord record_step(const System& sys, const SystemState& /*prev_state*/, const SystemState& state,
                                     const StepReport& report, const DiagnosticThresholds& thr = {}) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.step_index = state.step_index;
    rec.picard_iterations = report.picard_iterations;
    rec.species.resize(sys.species.size());
    bool neg = false, budget = false, energy = false;
    for (std::size_t s = 0; s < sys.species.size(); ++s) {
        auto& d = rec.species[s];
        d.name = sys.species[s].name;
        if (sys.two_dim) {
            detail::species_norms(sys.grid2, state.densities[s], sys.species[s].flux.height, d);
        } else {
            detail::species_norms(sys.grid1, state.densities[s], sys.species[s].flux.height, d);
        }
        detail::above_height_potential_work(sys, state.densities[s], sys.species[s].flux.height, state.potential, d);
        if (s < report.species.size()) {
            const auto& st = report.species[s];
            d.mass = st.mass_after;
            d.mass_residual = st.mass_residual;
            d.flux_integral = st.boundary_flux_integral;
            rec.mass_budget_residual = std::max(rec.mass_budget_residual, std::abs(st.mass_residual));
            rec.energy_balance_residual = std::max(rec.energy_balance_residual, st.energy_residual);
            if (std::abs(st.mass_residual) > thr.budget_rel * (1.0 + std::abs(st.mass_after))) budget = true;
            if (st.energy_residual > thr.energy_rel) energy = true;
        } else {
            d.mass = d.l1_norm;
        }
        if (d.min_value < thr.negativity) neg = true;
    }
    rec.potential = detail::potential_norms(sys, state.potential);
    if (neg) rec.flags.push_back(DiagnosticFlag::NegativityViolation);
    if (budget) rec.flags.push_back(DiagnosticFlag::BudgetViolation);
    if (energy) rec.flags.push_back(DiagnosticFlag::EnergyViolation);
    return rec;
}

// --- Gronwall envelope fitting ----------------------------------------------

struct GronwallFit {
    double A = 0.0;
    double B = 0.0;
    double max_exceedance = 0.0;  // of the series against A e^{Bt}; 0 by construction
    int hull_points = 0;
};

// Fits A e^{Bt} dominating the series: least squares of log-norm over the
// upper convex hull (so transient dips do not drag the envelope down), then
// the intercept is lifted until no sample exceeds the curve.
inline GronwallFit gronwall_envelope(const std::vector<double>& ts, const std::vector<double>& norms) {
    require(!ts.empty() && ts.size() == norms.size(), "gronwall_envelope: empty or mismatched series");
    require(ts.size() >= 3, "gronwall_envelope: need at least 3 samples");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (norms[i] > 0.0) pts.emplace_back(ts[i], std::log(norms[i]));
    }
    GronwallFit fit;
    if (pts.size() < 2) return fit;  // all-zero series: dominated by A = 0

    // upper convex hull, points already sorted by t
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            const double cross = (b.first - a.first) * (p.second - a.second) -
                                 (b.second - a.second) * (p.first - a.first);
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    fit.hull_points = static_cast<int>(hull.size());

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (const auto& p : hull) {
        st += p.first;
        sy += p.second;
        stt += p.first * p.first;
        sty += p.first * p.second;
    }
    const double m = static_cast<double>(hull.size());
    const double det = m * stt - st * st;
    double slope = 0.0, intercept = sy / m;
    if (det > 1e-300) {
        slope = (m * sty - st * sy) / det;
        intercept = (sy - slope * st) / m;
    }
    double lift = -1e300;
    for (const auto& p : pts) lift = std::max(lift, p.second - (intercept + slope * p.first));
    intercept += lift;
    fit.A = std::exp(intercept);
    fit.B = slope;
    double exceed = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double env = fit.A * std::exp(fit.B * ts[i]);
        if (env > 0.0) exceed = std::max(exceed, norms[i] / env - 1.0);
    }
    fit.max_exceedance = exceed;
    return fit;
}

// --- smallness threshold for the self-gravitation model ---------------------

inline double smallness_threshold(double gn_constant) {
    require(gn_constant > 0.0, "smallness_threshold: constant must be > 0");
    return 1.0 / (2.0 * gn_constant);
}

// Empirical discrete Gagliardo-Nirenberg constant: maximizes
// ||v||_3^3 / (||v||_1 ||v||_{H1}^2) over random fields (uniform noise,
// bumps, plateaus). A lower bound on the true sup, reported as measured.
inline double measure_gn_constant(const Grid2D& grid, int n_samples, std::uint64_t seed) {
    require(n_samples >= 1, "measure_gn_constant: need at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double best = 0.0;
    std::vector<double> v(grid.size());
    for (int s = 0; s < n_samples; ++s) {
        const int mode = s % 3;
        const double x0 = grid.x_left + unit(rng) * (grid.x_right - grid.x_left);
        const double y0 = grid.y_bottom + unit(rng) * (grid.y_top - grid.y_bottom);
        const double w = 0.02 + 0.3 * unit(rng);
        const double thresh = unit(rng);
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                const double x = grid.x_center(i), y = grid.y_center(j);
                double val = 0.0;
                if (mode == 0) {
                    val = unit(rng);
                } else if (mode == 1) {
                    const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
                    val = std::exp(-r2 / (2.0 * w * w));
                } else {
                    val = (std::abs(x - x0) + std::abs(y - y0) < thresh) ? 1.0 : 0.0;
                }
                v[grid.index(i, j)] = val;
            }
        }
        double l1 = 0.0, l2 = 0.0, l3 = 0.0, grad = 0.0;
        for (double val : v) {
            l1 += std::abs(val);
            l2 += val * val;
            l3 += std::abs(val) * val * val;
        }
        l1 *= grid.cell_volume();
        l2 *= grid.cell_volume();
        l3 *= grid.cell_volume();
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                const double c = v[grid.index(i, j)];
                if (i + 1 < grid.nx) {
                    const double g = (v[grid.index(i + 1, j)] - c) / grid.hx;
                    grad += g * g * grid.cell_volume();
                }
                if (j + 1 < grid.ny) {
                    const double g = (v[grid.index(i, j + 1)] - c) / grid.hy;
                    grad += g * g * grid.cell_volume();
                }
            }
        }
        const double h1 = l2 + grad;
        if (l1 > 1e-14 && h1 > 1e-14) best = std::max(best, l3 / (l1 * h1));
    }
    return best;
}

}  // namespace driftdiff
