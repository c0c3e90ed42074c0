// Declarative run configuration: a single JSON document selects the preset,
// grid, time stepping and preset parameters. Parsing normalizes the document
// (defaults materialized), so configs round-trip unchanged through
// serialization.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftdiff/presets.hpp"
#include "driftdiff/simulate.hpp"

namespace driftdiff {

using json = nlohmann::json;

// --- initial-condition forms -------------------------------------------------

struct U0Spec {
    std::string form = "constant";
    double value = 1.0;                             // constant
    double mean = 1.0;                              // cosine
    std::vector<std::array<double, 2>> modes;       // cosine: (k, amplitude)
    double amplitude = 1.0, center = 0.5, width = 0.1;  // bump (1-D)
    double x0 = 0.5, y0 = 0.5, sigma = 0.1;             // gaussian (2-D)
};

inline U0Spec parse_u0(const json& j) {
    U0Spec s;
    s.form = j.value("form", "constant");
    if (s.form == "constant") {
        s.value = j.value("value", 1.0);
    } else if (s.form == "cosine") {
        s.mean = j.value("mean", 1.0);
        for (const auto& m : j.value("modes", json::array())) {
            s.modes.push_back({m.at(0).get<double>(), m.at(1).get<double>()});
        }
    } else if (s.form == "bump") {
        s.amplitude = j.value("amplitude", 1.0);
        s.center = j.value("center", 0.5);
        s.width = j.value("width", 0.1);
    } else if (s.form == "gaussian") {
        s.amplitude = j.value("amplitude", 1.0);
        s.x0 = j.value("x0", 0.5);
        s.y0 = j.value("y0", 0.5);
        s.sigma = j.value("sigma", 0.1);
    } else {
        throw std::invalid_argument("unknown u0 form '" + s.form + "'");
    }
    return s;
}

inline json u0_to_json(const U0Spec& s) {
    json j{{"form", s.form}};
    if (s.form == "constant") {
        j["value"] = s.value;
    } else if (s.form == "cosine") {
        j["mean"] = s.mean;
        json modes = json::array();
        for (const auto& m : s.modes) modes.push_back({m[0], m[1]});
        j["modes"] = modes;
    } else if (s.form == "bump") {
        j["amplitude"] = s.amplitude;
        j["center"] = s.center;
        j["width"] = s.width;
    } else if (s.form == "gaussian") {
        j["amplitude"] = s.amplitude;
        j["x0"] = s.x0;
        j["y0"] = s.y0;
        j["sigma"] = s.sigma;
    }
    return j;
}

inline std::vector<double> sample_u0_1d(const U0Spec& s, const Grid1D& grid) {
    std::vector<double> u(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.cell_centers[i];
        if (s.form == "constant") {
            u[i] = s.value;
        } else if (s.form == "cosine") {
            double acc = s.mean;
            for (const auto& m : s.modes) acc += m[1] * std::cos(m[0] * M_PI * x);
            u[i] = acc;
        } else if (s.form == "bump") {
            const double d = (x - s.center) / s.width;
            u[i] = s.amplitude * std::exp(-0.5 * d * d);
        } else {
            throw std::invalid_argument("u0 form '" + s.form + "' is not valid on a 1-D grid");
        }
    }
    return u;
}

inline std::vector<double> sample_u0_2d(const U0Spec& s, const Grid2D& grid) {
    std::vector<double> u(grid.size(), 0.0);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x_center(i), y = grid.y_center(j);
            if (s.form == "constant") {
                u[grid.index(i, j)] = s.value;
            } else if (s.form == "gaussian") {
                const double r2 = (x - s.x0) * (x - s.x0) + (y - s.y0) * (y - s.y0);
                u[grid.index(i, j)] = s.amplitude * std::exp(-0.5 * r2 / (s.sigma * s.sigma));
            } else {
                throw std::invalid_argument("u0 form '" + s.form + "' is not valid on a 2-D grid");
            }
        }
    }
    return u;
}

// --- run configuration --------------------------------------------------------

struct RunConfig {
    std::string preset;  // corrosion | generic-drift | self-grav | heat-neumann | robin-mms
    int n_cells = 128;   // 1-D grid
    int nx = 48, ny = 48;
    double T = 1.0;
    double dt = 0.01;
    double picard_tol = 1e-10;
    int picard_max_iter = 50;
    int cadence = 1;
    std::uint64_t seed = 20240711;
    std::string output_dir = "out";
    json params = json::object();
    json sweep;  // optional {"parameters": {path: [values...]}}

    bool two_dim() const { return preset == "self-grav"; }
};

namespace detail {

inline json flux_params_to_json(const CorrosionFluxParams& p) {
    return json{{"m", p.m}, {"k", p.k}, {"a", p.a}, {"b", p.b}, {"u_max", p.u_max}};
}

inline CorrosionFluxParams parse_flux_params(const json& j) {
    CorrosionFluxParams p;
    p.m = j.value("m", 1.0);
    p.k = j.value("k", 1.0);
    p.a = j.value("a", 1.0);
    p.b = j.value("b", 1.0);
    p.u_max = j.value("u_max", 1.0);
    return p;
}

inline json normalize_corrosion_params(const json& in) {
    json out;
    out["epsilon"] = in.value("epsilon", 0.1);
    out["lambda"] = in.value("lambda", 1.0);
    out["zeta"] = in.value("zeta", 0.0);
    out["psi"] = in.value("psi", 0.0);
    out["delta_v0"] = in.value("delta_v0", 0.0);
    out["delta_v1"] = in.value("delta_v1", 0.0);
    out["A0"] = in.value("A0", 0.0);
    out["A1"] = in.value("A1", 0.0);
    json species = json::array();
    const json defaults = json::array({json::object(), json::object(), json::object()});
    const json& sp_in = in.contains("species") ? in.at("species") : defaults;
    require(sp_in.is_array() && sp_in.size() == 3, "corrosion params: exactly 3 species blocks required");
    for (const auto& sp : sp_in) {
        json one;
        one["left"] = flux_params_to_json(parse_flux_params(sp.value("left", json::object())));
        one["right"] = flux_params_to_json(parse_flux_params(sp.value("right", json::object())));
        one["u0"] = u0_to_json(parse_u0(sp.value("u0", json{{"form", "constant"}, {"value", 0.5}})));
        species.push_back(one);
    }
    out["species"] = species;
    return out;
}

inline json normalize_generic_params(const json& in) {
    json out;
    out["zeta"] = in.value("zeta", 0.0);
    out["A0"] = in.value("A0", 0.0);
    out["A1"] = in.value("A1", 0.0);
    out["V0"] = in.value("V0", 0.0);
    out["V1"] = in.value("V1", 0.0);
    json support = in.value("measure_support", json::array({0.0, 1.0}));
    require(support.is_array() && support.size() == 2, "generic params: measure_support must be [a, b]");
    out["measure_support"] = support;
    json species = json::array();
    require(in.contains("species") && in.at("species").is_array() && !in.at("species").empty(),
            "generic params: nonempty species array required");
    int idx = 0;
    for (const auto& sp : in.at("species")) {
        json one;
        one["name"] = sp.value("name", "species" + std::to_string(idx));
        one["alpha"] = sp.value("alpha", 0.0);
        one["beta"] = sp.value("beta", 0.0);
        one["rho"] = sp.value("rho", 0.0);
        one["R"] = sp.value("R", 1.0);
        const json f = sp.value("f", json{{"form", "const_neg"}, {"c", 1.0}});
        one["f"] = json{{"form", f.value("form", "const_neg")}, {"c", f.value("c", 1.0)}, {"d", f.value("d", 0.0)}};
        const json g = sp.value("g", json{{"form", "linear_excess"}, {"scale", 1.0}});
        one["g"] = json{{"form", g.value("form", "linear_excess")}, {"scale", g.value("scale", 1.0)}};
        json atoms = json::array();
        for (const auto& a : sp.value("atoms", json::array())) {
            atoms.push_back({{"s", a.value("s", 0.5)}, {"theta", a.value("theta", 1.0)}});
        }
        one["atoms"] = atoms;
        one["u0"] = u0_to_json(parse_u0(sp.value("u0", json{{"form", "constant"}, {"value", 0.5}})));
        species.push_back(one);
        ++idx;
    }
    out["species"] = species;
    return out;
}

inline json normalize_self_grav_params(const json& in) {
    json out;
    out["p"] = in.value("p", 8);
    out["gn_samples"] = in.value("gn_samples", 120);
    out["u0"] = u0_to_json(parse_u0(in.value(
        "u0", json{{"form", "gaussian"}, {"amplitude", 0.05}, {"x0", 0.5}, {"y0", 0.5}, {"sigma", 0.1}})));
    return out;
}

inline json normalize_heat_params(const json& in) {
    json out;
    json modes = in.value("modes", json::array({1.0, 1.0}));
    require(modes.is_array() && !modes.empty(), "heat params: modes must be a nonempty coefficient array");
    out["modes"] = modes;
    return out;
}

inline json normalize_robin_mms_params(const json& in) {
    json out;
    out["A0"] = in.value("A0", 0.3);
    out["A1"] = in.value("A1", -0.2);
    out["lambda"] = in.value("lambda", 1.0);
    json quad = in.value("quad", json::array({1.0, 0.5, -0.25}));
    require(quad.is_array() && quad.size() == 3, "robin-mms params: quad must be [q0, q1, q2]");
    out["quad"] = quad;
    return out;
}

}  // namespace detail

inline RunConfig parse_run_config(const json& j) {
    RunConfig c;
    c.preset = j.value("preset", "");
    require(c.preset == "corrosion" || c.preset == "generic-drift" || c.preset == "self-grav" ||
                c.preset == "heat-neumann" || c.preset == "robin-mms",
            "config: unknown preset '" + c.preset + "'");
    const json grid = j.value("grid", json::object());
    c.n_cells = grid.value("n_cells", 128);
    c.nx = grid.value("nx", 48);
    c.ny = grid.value("ny", 48);
    const json time = j.value("time", json::object());
    c.T = time.value("T", 1.0);
    c.dt = time.value("dt", 0.01);
    require(c.T > 0.0 && c.dt > 0.0, "config: T and dt must be > 0");
    const json pic = j.value("picard", json::object());
    c.picard_tol = pic.value("tol", 1e-10);
    c.picard_max_iter = pic.value("max_iter", 50);
    const json diag = j.value("diagnostics", json::object());
    c.cadence = diag.value("cadence", 1);
    require(c.cadence >= 1, "config: diagnostics cadence must be >= 1");
    c.seed = j.value("seed", static_cast<std::uint64_t>(20240711));
    c.output_dir = j.value("output_dir", "out");

    const json params = j.value("params", json::object());
    if (c.preset == "corrosion") {
        c.params = detail::normalize_corrosion_params(params);
    } else if (c.preset == "generic-drift") {
        c.params = detail::normalize_generic_params(params);
    } else if (c.preset == "self-grav") {
        c.params = detail::normalize_self_grav_params(params);
    } else if (c.preset == "heat-neumann") {
        c.params = detail::normalize_heat_params(params);
    } else {
        c.params = detail::normalize_robin_mms_params(params);
    }
    if (j.contains("sweep")) c.sweep = j.at("sweep");
    return c;
}

inline json to_json(const RunConfig& c) {
    json j;
    j["preset"] = c.preset;
    if (c.two_dim()) {
        j["grid"] = json{{"nx", c.nx}, {"ny", c.ny}};
    } else {
        j["grid"] = json{{"n_cells", c.n_cells}};
    }
    j["time"] = json{{"T", c.T}, {"dt", c.dt}};
    j["picard"] = json{{"tol", c.picard_tol}, {"max_iter", c.picard_max_iter}};
    j["diagnostics"] = json{{"cadence", c.cadence}};
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["params"] = c.params;
    if (!c.sweep.is_null()) j["sweep"] = c.sweep;
    return j;
}

inline RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "config: cannot open " + path.string());
    json j;
    in >> j;
    return parse_run_config(j);
}

// --- building the runtime system ----------------------------------------------

struct BuiltSystem {
    System system;
    RunSettings settings;
    json build_info = json::object();
};

inline BuiltSystem build_from_config(const RunConfig& c) {
    BuiltSystem out;
    out.settings.T = c.T;
    out.settings.step.dt = c.dt;
    out.settings.step.picard_tol = c.picard_tol;
    out.settings.step.picard_max_iter = c.picard_max_iter;
    out.settings.diagnostics_cadence = c.cadence;

    if (c.preset == "heat-neumann") {
        const Grid1D grid = build_grid_1d(c.n_cells);
        out.system = build_heat_neumann(grid, c.params.at("modes").get<std::vector<double>>());
    } else if (c.preset == "corrosion") {
        const Grid1D grid = build_grid_1d(c.n_cells);
        CorrosionParams p;
        p.epsilon = c.params.at("epsilon").get<double>();
        p.lambda = c.params.at("lambda").get<double>();
        p.zeta = c.params.at("zeta").get<double>();
        p.psi = c.params.at("psi").get<double>();
        p.delta_v0 = c.params.at("delta_v0").get<double>();
        p.delta_v1 = c.params.at("delta_v1").get<double>();
        p.A0 = c.params.at("A0").get<double>();
        p.A1 = c.params.at("A1").get<double>();
        p.validator_seed = c.seed;
        for (int i = 0; i < 3; ++i) {
            const json& sp = c.params.at("species").at(i);
            p.species[i].left = detail::parse_flux_params(sp.at("left"));
            p.species[i].right = detail::parse_flux_params(sp.at("right"));
            p.species[i].u0 = sample_u0_1d(parse_u0(sp.at("u0")), grid);
        }
        out.system = build_corrosion(grid, p);
    } else if (c.preset == "generic-drift") {
        const Grid1D grid = build_grid_1d(c.n_cells);
        GenericParams p;
        p.zeta = c.params.at("zeta").get<double>();
        p.A0 = c.params.at("A0").get<double>();
        p.A1 = c.params.at("A1").get<double>();
        p.V0 = c.params.at("V0").get<double>();
        p.V1 = c.params.at("V1").get<double>();
        p.measure_a = c.params.at("measure_support").at(0).get<double>();
        p.measure_b = c.params.at("measure_support").at(1).get<double>();
        p.validator_seed = c.seed;
        for (const auto& sp : c.params.at("species")) {
            GenericSpeciesParams g;
            g.name = sp.at("name").get<std::string>();
            g.alpha = sp.at("alpha").get<double>();
            g.beta = sp.at("beta").get<double>();
            g.rho = sp.at("rho").get<double>();
            g.R = sp.at("R").get<double>();
            g.f = make_f_profile(sp.at("f").at("form").get<std::string>(), sp.at("f").at("c").get<double>(),
                                 sp.at("f").at("d").get<double>());
            g.g = make_g_profile(sp.at("g").at("form").get<std::string>(), sp.at("g").at("scale").get<double>(),
                                 g.R);
            for (const auto& a : sp.at("atoms")) {
                g.atoms.atoms.push_back({a.at("s").get<double>(), a.at("theta").get<double>()});
            }
            g.u0 = sample_u0_1d(parse_u0(sp.at("u0")), grid);
            p.species.push_back(std::move(g));
        }
        out.system = build_generic(grid, p);
    } else if (c.preset == "self-grav") {
        const Grid2D grid(c.nx, c.ny);
        SelfGravParams p;
        p.p = c.params.at("p").get<int>();
        p.gn_samples = c.params.at("gn_samples").get<int>();
        p.seed = c.seed;
        p.u0 = sample_u0_2d(parse_u0(c.params.at("u0")), grid);
        SelfGravBuild build = build_self_grav(grid, p);
        out.system = std::move(build.system);
        out.build_info["gn_constant"] = build.gn_constant;
        out.build_info["smallness_threshold"] = build.threshold;
        out.build_info["u0_l1"] = build.u0_l1;
        out.build_info["small_data_regime"] = build.small_data;
    } else {
        throw std::invalid_argument("config: preset '" + c.preset +
                                    "' is a solver-free oracle; it only supports the convergence command");
    }
    return out;
}

}  // namespace driftdiff
