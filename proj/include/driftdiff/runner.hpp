// Command implementations behind the CLI: run, validate, truncation study,
// convergence study, parameter sweep. Everything a command writes is
// deterministic except run.json, which carries the wall-clock metadata.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "driftdiff/config.hpp"
#include "driftdiff/io.hpp"
#include "driftdiff/oracles.hpp"

namespace driftdiff {

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 1 config error, 2 solver failure, 3 invariant violation
    std::string message;
    json summary = json::object();
};

// --out beats the config's output_dir; DRIFTDIFF_OUT_ROOT prefixes relative
// directories.
inline std::filesystem::path resolve_output_dir(const std::string& cli_out, const RunConfig& cfg) {
    std::filesystem::path dir = cli_out.empty() ? cfg.output_dir : cli_out;
    if (dir.is_relative()) {
        if (const char* root = std::getenv("DRIFTDIFF_OUT_ROOT")) {
            dir = std::filesystem::path(root) / dir;
        }
    }
    return dir;
}

namespace detail {

struct ColumnSet {
    std::vector<std::string> names;
    std::vector<std::string> descriptions;

    void add(const std::string& name, const std::string& desc) {
        names.push_back(name);
        descriptions.push_back(desc);
    }
};

inline ColumnSet trajectory_columns(const System& sys) {
    ColumnSet c;
    c.add("step", "time step index");
    c.add("t", "simulation time after the step");
    c.add("picard_iters", "Picard iterations needed by the step");
    for (const auto& sp : sys.species) {
        const std::string& n = sp.name;
        c.add(n + "_mass", "cell integral of the density");
        c.add(n + "_l1", "discrete L1 norm");
        c.add(n + "_l2", "discrete L2 norm");
        c.add(n + "_min", "minimum cell value");
        c.add(n + "_negpart", "L1 norm of the negative part");
        c.add(n + "_above_k", "L1 norm of (u - k)+ with k from the flux spec");
        c.add(n + "_flux_int", "applied boundary flux integral of the step");
        c.add(n + "_budget_resid", "tau*dmass - dt*flux integral");
        c.add(n + "_above_k_lapV", "lap(V) integrated where u > k (report only)");
        c.add(n + "_above_k_dnuV", "dV/dnu integrated over boundary faces with u > k (report only)");
    }
    c.add("v_w1inf", "discrete W^{1,inf} norm of the potential");
    c.add("v_trace_max", "max |V| on the boundary");
    c.add("v_w21", "L1 norm of discrete second differences of V (report only)");
    c.add("budget_resid_max", "max |mass budget residual| across species");
    c.add("energy_resid_max", "max relative energy-balance defect across species");
    c.add("flags", "semicolon-separated invariant flags (empty on a passing step)");
    return c;
}

inline std::vector<std::string> trajectory_row(const DiagnosticsRecord& r) {
    std::vector<std::string> row;
    row.push_back(format_int(r.step_index));
    row.push_back(format_double(r.t));
    row.push_back(format_int(r.picard_iterations));
    for (const auto& s : r.species) {
        row.push_back(format_double(s.mass));
        row.push_back(format_double(s.l1_norm));
        row.push_back(format_double(s.l2_norm));
        row.push_back(format_double(s.min_value));
        row.push_back(format_double(s.negative_part_l1));
        row.push_back(format_double(s.above_height_l1));
        row.push_back(format_double(s.flux_integral));
        row.push_back(format_double(s.mass_residual));
        row.push_back(format_double(s.above_k_laplacian_v));
        row.push_back(format_double(s.above_k_outflux_v));
    }
    row.push_back(format_double(r.potential.w1inf_norm));
    row.push_back(format_double(r.potential.boundary_trace_max));
    row.push_back(format_double(r.potential.w21_seminorm_l1));
    row.push_back(format_double(r.mass_budget_residual));
    row.push_back(format_double(r.energy_balance_residual));
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
        if (i) flags.push_back(';');
        flags += flag_name(r.flags[i]);
    }
    row.push_back(flags);
    return row;
}

inline void write_final_state(const std::filesystem::path& path, const System& sys, const SystemState& state,
                              ColumnSet& schema) {
    CsvFile csv(path);
    std::vector<std::string> header{"cell"};
    schema.add("cell", "flattened cell index");
    if (sys.two_dim) {
        header.insert(header.end(), {"i", "j", "x", "y"});
        schema.add("i", "cell column index");
        schema.add("j", "cell row index");
        schema.add("x", "cell center x");
        schema.add("y", "cell center y");
    } else {
        header.push_back("x");
        schema.add("x", "cell center");
    }
    for (const auto& sp : sys.species) {
        header.push_back(sp.name);
        schema.add(sp.name, "final density of " + sp.name);
    }
    header.push_back("V");
    schema.add("V", "final potential");
    csv.row(header);

    const std::size_t n = sys.n_cells();
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::string> row{format_int(static_cast<long long>(k))};
        if (sys.two_dim) {
            const int i = static_cast<int>(k) % sys.grid2.nx;
            const int j = static_cast<int>(k) / sys.grid2.nx;
            row.push_back(format_int(i));
            row.push_back(format_int(j));
            row.push_back(format_double(sys.grid2.x_center(i)));
            row.push_back(format_double(sys.grid2.y_center(j)));
        } else {
            row.push_back(format_double(sys.grid1.cell_centers[k]));
        }
        for (const auto& d : state.densities) row.push_back(format_double(d[k]));
        row.push_back(format_double(state.potential.values[k]));
        csv.row(row);
    }
}

inline json schema_entry(const ColumnSet& c) {
    json cols = json::array();
    for (std::size_t i = 0; i < c.names.size(); ++i) {
        cols.push_back(json{{"name", c.names[i]}, {"description", c.descriptions[i]}});
    }
    return json{{"columns", cols}};
}

// Empirical (A-1) surrogate of the run's potential operator, reported in
// run.json. Measured over random density pairs with the config seed.
inline json lipschitz_report(const System& sys, std::uint64_t seed) {
    const int pairs = 30;
    LipschitzSurrogate lip;
    if (sys.two_dim) {
        lip = measure_potential_lipschitz(sys.potential, sys.grid2, sys.species.size(), pairs, seed);
    } else {
        lip = measure_potential_lipschitz(sys.potential, sys.grid1, sys.species.size(), pairs, seed);
    }
    return json{{"max_ratio", lip.max_ratio}, {"mean_ratio", lip.mean_ratio}, {"pairs", lip.pairs}};
}

inline double now_unix_s() {
    return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

}  // namespace detail

inline RunOutcome cmd_validate(const RunConfig& cfg) {
    RunOutcome out;
    try {
        BuiltSystem built = build_from_config(cfg);
        out.summary["config"] = to_json(cfg);
        out.summary["build_info"] = built.build_info;
        out.summary["species"] = built.system.species.size();
        out.summary["cells"] = built.system.n_cells();
        out.message = "config valid";
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.message = std::string("config: ") + e.what();
    }
    return out;
}

inline RunOutcome cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    RunOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    BuiltSystem built;
    try {
        built = build_from_config(cfg);
        std::filesystem::create_directories(out_dir);
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.message = std::string("config: ") + e.what();
        return out;
    }

    const SimulationResult res = run_simulation(built.system, built.settings);

    auto cols = detail::trajectory_columns(built.system);
    {
        CsvFile csv(out_dir / "trajectory.csv");
        csv.row(cols.names);
        for (const auto& r : res.records) csv.row(detail::trajectory_row(r));
    }
    detail::ColumnSet state_cols;
    detail::write_final_state(out_dir / "final_state.csv", built.system, res.final_state, state_cols);
    write_text_file(out_dir / "schema.json",
                    json{{"trajectory.csv", detail::schema_entry(cols)},
                         {"final_state.csv", detail::schema_entry(state_cols)}}
                        .dump(2) +
                        "\n");

    long neg = 0, budget = 0, energy = 0, picard = 0;
    double min_density = 0.0, max_budget = 0.0, max_energy = 0.0;
    if (!built.system.species.empty() && !res.final_state.densities.empty()) {
        min_density = res.final_state.densities[0].empty() ? 0.0 : res.final_state.densities[0][0];
    }
    for (const auto& r : res.records) {
        for (const auto& s : r.species) min_density = std::min(min_density, s.min_value);
        max_budget = std::max(max_budget, r.mass_budget_residual);
        max_energy = std::max(max_energy, r.energy_balance_residual);
        if (r.has_flag(DiagnosticFlag::NegativityViolation)) ++neg;
        if (r.has_flag(DiagnosticFlag::BudgetViolation)) ++budget;
        if (r.has_flag(DiagnosticFlag::EnergyViolation)) ++energy;
        if (r.has_flag(DiagnosticFlag::PicardFail)) ++picard;
    }

    // fitted exponential envelopes of the per-species L1 norms
    json envelopes = json::array();
    if (res.records.size() >= 3) {
        for (std::size_t s = 0; s < built.system.species.size(); ++s) {
            std::vector<double> ts, l1s;
            for (const auto& r : res.records) {
                if (s < r.species.size()) {
                    ts.push_back(r.t);
                    l1s.push_back(r.species[s].l1_norm);
                }
            }
            if (ts.size() >= 3) {
                const auto fit = gronwall_envelope(ts, l1s);
                envelopes.push_back(json{{"species", built.system.species[s].name},
                                         {"A", fit.A},
                                         {"B", fit.B},
                                         {"max_exceedance", fit.max_exceedance}});
            }
        }
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json run_meta;
    run_meta["config"] = to_json(cfg);
    run_meta["build_info"] = built.build_info;
    run_meta["potential_lipschitz"] = detail::lipschitz_report(built.system, cfg.seed);
    run_meta["l1_gronwall_envelopes"] = envelopes;
    run_meta["outcome"] = json{{"ok", res.ok},
                               {"error", res.error},
                               {"steps", res.steps_taken},
                               {"records", res.records.size()},
                               {"any_flag", res.any_flag}};
    run_meta["invariants"] = json{{"min_density", min_density},
                                  {"max_budget_residual", max_budget},
                                  {"max_energy_residual", max_energy},
                                  {"negativity_violations", neg},
                                  {"budget_violations", budget},
                                  {"energy_violations", energy},
                                  {"picard_failures", picard}};
    const double h = built.system.two_dim ? std::min(built.system.grid2.hx, built.system.grid2.hy)
                                          : built.system.grid1.cell_width;
    if (cfg.dt > h) run_meta["accuracy_note"] = "dt exceeds h; implicit Euler remains stable but accuracy degrades";
    run_meta["wall_time_s"] = wall;
    run_meta["written_at_unix_s"] = detail::now_unix_s();

    if (!res.ok) {
        out.exit_code = 2;
        out.message = "solver: " + res.error;
    } else if (res.any_flag) {
        out.exit_code = 3;
        out.message = "invariant: diagnostic flags raised during the run";
    } else {
        out.message = "run complete";
    }
    run_meta["exit_code"] = out.exit_code;
    write_text_file(out_dir / "run.json", run_meta.dump(2) + "\n");
    out.summary = run_meta;
    return out;
}

// Runs the base flux and each truncated sigma_p, comparing trajectories.
// Differences must be nonincreasing in p and exactly zero once p clears the
// max density attained by the base run.
inline RunOutcome cmd_truncation_study(const RunConfig& cfg, std::vector<int> p_list,
                                       const std::filesystem::path& out_dir) {
    RunOutcome out;
    if (p_list.empty()) {
        out.exit_code = 1;
        out.message = "config: empty p list";
        return out;
    }
    std::sort(p_list.begin(), p_list.end());
    BuiltSystem built;
    try {
        built = build_from_config(cfg);
        std::filesystem::create_directories(out_dir);
        for (int p : p_list) require(p >= 1, "truncation study: p must be >= 1");
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.message = std::string("config: ") + e.what();
        return out;
    }
    built.settings.diagnostics_cadence = 1;

    auto run_collect = [&](const System& sys, std::vector<std::vector<std::vector<double>>>& hist) {
        hist.clear();
        const auto res = run_simulation(sys, built.settings,
                                        [&](const SystemState& st, const DiagnosticsRecord&) {
                                            hist.push_back(st.densities);
                                        });
        return res;
    };

    std::vector<std::vector<std::vector<double>>> base_hist;
    const auto base_res = run_collect(built.system, base_hist);
    if (!base_res.ok) {
        out.exit_code = 2;
        out.message = "solver: base run failed: " + base_res.error;
        return out;
    }
    double max_density = 0.0;
    for (const auto& sp : built.system.species) {
        for (double v : sp.initial_condition) max_density = std::max(max_density, v);
    }
    for (const auto& step : base_hist) {
        for (const auto& d : step) {
            for (double v : d) max_density = std::max(max_density, v);
        }
    }

    std::vector<double> diffs;
    for (int p : p_list) {
        System truncated = built.system;
        for (std::size_t s = 0; s < truncated.species.size(); ++s) {
            truncated.species[s].flux = truncate_flux(built.system.species[s].flux, p);
        }
        std::vector<std::vector<std::vector<double>>> hist;
        const auto res = run_collect(truncated, hist);
        if (!res.ok) {
            out.exit_code = 2;
            out.message = "solver: truncated run p=" + std::to_string(p) + " failed: " + res.error;
            return out;
        }
        double diff = 0.0;
        for (std::size_t st = 0; st < hist.size(); ++st) {
            for (std::size_t s = 0; s < hist[st].size(); ++s) {
                for (std::size_t i = 0; i < hist[st][s].size(); ++i) {
                    diff = std::max(diff, std::abs(hist[st][s][i] - base_hist[st][s][i]));
                }
            }
        }
        diffs.push_back(diff);
    }

    detail::ColumnSet cols;
    cols.add("p", "truncation index");
    cols.add("max_abs_difference", "max |u_p - u| over all steps, species, cells");
    {
        CsvFile csv(out_dir / "truncation.csv");
        csv.row(cols.names);
        for (std::size_t i = 0; i < p_list.size(); ++i) {
            csv.row({format_int(p_list[i]), format_double(diffs[i])});
        }
    }
    write_text_file(out_dir / "schema.json", json{{"truncation.csv", detail::schema_entry(cols)}}.dump(2) + "\n");

    bool monotone = true, exact = true;
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
        if (diffs[i + 1] > diffs[i] + 1e-14) monotone = false;
    }
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        if (static_cast<double>(p_list[i]) >= max_density && diffs[i] != 0.0) exact = false;
    }
    out.summary = json{{"p", p_list}, {"max_abs_difference", diffs}, {"base_max_density", max_density},
                       {"monotone_nonincreasing", monotone}, {"exact_beyond_max_density", exact}};
    if (!monotone || !exact) {
        out.exit_code = 3;
        out.message = "invariant: truncation consistency violated";
    } else {
        out.message = "truncation study complete";
    }
    write_text_file(out_dir / "truncation_summary.json", out.summary.dump(2) + "\n");
    return out;
}

inline RunOutcome cmd_convergence(const RunConfig& cfg, const std::vector<int>& resolutions,
                                  const std::filesystem::path& out_dir) {
    RunOutcome out;
    if (resolutions.size() < 2) {
        out.exit_code = 1;
        out.message = "config: need at least two resolutions to fit an order";
        return out;
    }
    if (cfg.preset != "heat-neumann" && cfg.preset != "robin-mms") {
        out.exit_code = 1;
        out.message = "config: convergence study requires an analytic or manufactured oracle preset "
                      "(heat-neumann or robin-mms)";
        return out;
    }
    std::filesystem::create_directories(out_dir);

    std::vector<double> hs, errors;
    try {
        for (int n : resolutions) {
            require(n >= 4, "convergence: resolution too small");
            const Grid1D grid = build_grid_1d(n);
            double err = 0.0;
            if (cfg.preset == "heat-neumann") {
                const auto coeffs = cfg.params.at("modes").get<std::vector<double>>();
                System sys = build_heat_neumann(grid, coeffs);
                RunSettings settings;
                settings.T = cfg.T;
                // cfg.dt is the step at the coarsest resolution; refining it
                // with h^2 keeps the first-order time error at the spatial
                // rate, so the fit isolates the spatial order
                const int n0 = *std::min_element(resolutions.begin(), resolutions.end());
                const double refine = static_cast<double>(n0) / n;
                settings.step.dt = cfg.dt * refine * refine;
                settings.step.picard_tol = cfg.picard_tol;
                settings.step.picard_max_iter = cfg.picard_max_iter;
                settings.diagnostics_cadence = 1 << 20;
                const auto res = run_simulation(sys, settings);
                if (!res.ok) throw SolverError(res.error);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double exact = heat_neumann_analytic(grid.cell_centers[i], cfg.T, coeffs);
                    err = std::max(err, std::abs(res.final_state.densities[0][i] - exact));
                }
            } else {
                RobinPoissonSpec spec;
                spec.A0 = cfg.params.at("A0").get<double>();
                spec.A1 = cfg.params.at("A1").get<double>();
                spec.lambda = cfg.params.at("lambda").get<double>();
                const auto q = cfg.params.at("quad").get<std::vector<double>>();
                auto vstar = [&](double x) { return std::sin(M_PI * x) + q[0] + q[1] * x + q[2] * x * x; };
                auto dvstar = [&](double x) { return M_PI * std::cos(M_PI * x) + q[1] + 2.0 * q[2] * x; };
                spec.V0 = vstar(0.0) + spec.A0 * dvstar(0.0);
                spec.V1 = vstar(1.0) + spec.A1 * dvstar(1.0);
                std::vector<double> rhs(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double x = grid.cell_centers[i];
                    rhs[i] = spec.lambda * (-M_PI * M_PI * std::sin(M_PI * x) + 2.0 * q[2]);
                }
                const auto field = solve_robin_poisson_1d(spec, grid, rhs);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    err = std::max(err, std::abs(field.values[i] - vstar(grid.cell_centers[i])));
                }
            }
            hs.push_back(grid.cell_width);
            errors.push_back(err);
        }
    } catch (const SolverError& e) {
        out.exit_code = 2;
        out.message = std::string("solver: ") + e.what();
        return out;
    } catch (const std::exception& e) {
        out.exit_code = 1;
        out.message = std::string("config: ") + e.what();
        return out;
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double lx = std::log(hs[i]), ly = std::log(std::max(errors[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    detail::ColumnSet cols;
    cols.add("n_cells", "grid resolution");
    cols.add("h", "cell width");
    cols.add("max_error", "max-norm error against the oracle");
    {
        CsvFile csv(out_dir / "convergence.csv");
        csv.row(cols.names);
        for (std::size_t i = 0; i < hs.size(); ++i) {
            csv.row({format_int(resolutions[i]), format_double(hs[i]), format_double(errors[i])});
        }
    }
    write_text_file(out_dir / "schema.json", json{{"convergence.csv", detail::schema_entry(cols)}}.dump(2) + "\n");
    out.summary = json{{"order", order}, {"h", hs}, {"errors", errors}};
    write_text_file(out_dir / "convergence_summary.json", out.summary.dump(2) + "\n");
    if (order >= 1.8) {
        out.message = "fitted order " + format_double(order);
    } else {
        out.exit_code = 3;
        out.message = "invariant: fitted spatial order " + format_double(order) + " < 1.8";
    }
    return out;
}

inline RunOutcome cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, int jobs) {
    RunOutcome out;
    if (cfg.sweep.is_null() || !cfg.sweep.contains("parameters") || cfg.sweep.at("parameters").empty()) {
        out.exit_code = 1;
        out.message = "config: sweep requires a nonempty sweep.parameters block";
        return out;
    }
    std::vector<std::string> names;
    std::vector<std::vector<json>> values;
    for (const auto& [key, arr] : cfg.sweep.at("parameters").items()) {
        if (!arr.is_array() || arr.empty()) {
            out.exit_code = 1;
            out.message = "config: sweep parameter '" + key + "' must be a nonempty array";
            return out;
        }
        names.push_back(key);
        values.emplace_back(arr.begin(), arr.end());
    }
    std::size_t total = 1;
    for (const auto& v : values) total *= v.size();

    json base = to_json(cfg);
    base.erase("sweep");
    for (const auto& name : names) {
        std::string path = name;
        std::replace(path.begin(), path.end(), '.', '/');
        if (!base.contains(json::json_pointer("/" + path))) {
            out.exit_code = 1;
            out.message = "config: sweep parameter '" + name + "' does not exist in the configuration";
            return out;
        }
    }
    std::filesystem::create_directories(out_dir);

    struct PointResult {
        int exit_code = 0;
        std::string message;
        std::vector<json> assignment;
        std::string dir;
    };
    std::vector<PointResult> results(total);

    auto run_point = [&](std::size_t idx) {
        PointResult& pr = results[idx];
        std::ostringstream dir_name;
        dir_name << "point_" << std::setw(3) << std::setfill('0') << idx;
        pr.dir = dir_name.str();
        json doc = base;
        std::size_t rem = idx;
        for (std::size_t k = 0; k < names.size(); ++k) {
            const std::size_t vi = rem % values[k].size();
            rem /= values[k].size();
            pr.assignment.push_back(values[k][vi]);
            std::string path = names[k];
            std::replace(path.begin(), path.end(), '.', '/');
            doc[json::json_pointer("/" + path)] = values[k][vi];
        }
        try {
            const RunConfig point_cfg = parse_run_config(doc);
            const RunOutcome r = cmd_run(point_cfg, out_dir / pr.dir);
            pr.exit_code = r.exit_code;
            pr.message = r.message;
        } catch (const std::exception& e) {
            pr.exit_code = 1;
            pr.message = std::string("config: ") + e.what();
        }
    };

    const int workers = std::max(1, jobs);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= total) break;
                run_point(idx);
            }
        });
    }
    for (auto& th : pool) th.join();

    detail::ColumnSet cols;
    cols.add("point", "sweep point index");
    for (const auto& n : names) cols.add(n, "swept parameter value");
    cols.add("exit_code", "per-point exit code (0 pass)");
    cols.add("dir", "output subdirectory of the point");
    {
        CsvFile csv(out_dir / "index.csv");
        csv.row(cols.names);
        for (std::size_t i = 0; i < total; ++i) {
            std::vector<std::string> row{format_int(static_cast<long long>(i))};
            for (const auto& v : results[i].assignment) {
                row.push_back(v.is_number() ? format_double(v.get<double>()) : v.dump());
            }
            row.push_back(format_int(results[i].exit_code));
            row.push_back(results[i].dir);
            csv.row(row);
        }
    }
    write_text_file(out_dir / "schema.json", json{{"index.csv", detail::schema_entry(cols)}}.dump(2) + "\n");

    int worst = 0;
    std::size_t failures = 0;
    for (const auto& r : results) {
        worst = std::max(worst, r.exit_code);
        if (r.exit_code != 0) ++failures;
    }
    out.summary = json{{"points", total}, {"failures", failures}};
    out.exit_code = worst;
    out.message = failures == 0 ? "sweep complete"
                                : "sweep: " + std::to_string(failures) + " of " + std::to_string(total) +
                                      " points failed";
    return out;
}

}  // namespace driftdiff
