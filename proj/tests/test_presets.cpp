#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "driftdiff/config.hpp"

using namespace driftdiff;

TEST_CASE("corrosion preset wiring") {
    const Grid1D grid = build_grid_1d(24);
    CorrosionParams p;
    p.epsilon = 0.1;
    p.lambda = 1.3;
    p.zeta = 0.2;
    p.psi = 0.7;
    for (auto& sp : p.species) sp.u0.assign(grid.size(), 0.4);

    SECTION("time scales follow eps^{2-i} and alphas the gammas") {
        const System sys = build_corrosion(grid, p);
        CHECK(sys.species[0].time_scale == Catch::Approx(0.1));
        CHECK(sys.species[1].time_scale == Catch::Approx(1.0));
        CHECK(sys.species[2].time_scale == Catch::Approx(10.0));
        CHECK(sys.species[0].alpha == -1.0);
        CHECK(sys.species[1].alpha == 3.0);
        CHECK(sys.species[2].alpha == 1.0);
        CHECK(sys.species[0].flux.height == Catch::Approx(1.0));  // u_max
        CHECK(sys.species[0].flux.lambda_T == 0.0);
    }

    SECTION("the Poisson solve sees -lambda V'' = gamma.u + zeta") {
        const System sys = build_corrosion(grid, p);
        std::vector<std::vector<double>> u(3);
        for (int s = 0; s < 3; ++s) {
            u[s].resize(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                u[s][i] = 0.2 + 0.1 * s + 0.05 * std::sin((s + 1) * grid.cell_centers[i]);
            }
        }
        const auto V = sys.potential.apply(0.0, u);
        const double h2 = grid.cell_width * grid.cell_width;
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            const double lap = (V.values[i - 1] - 2.0 * V.values[i] + V.values[i + 1]) / h2;
            const double charge = corrosion_gammas[0] * u[0][i] + corrosion_gammas[1] * u[1][i] +
                                  corrosion_gammas[2] * u[2][i] + p.zeta;
            CHECK(-p.lambda * lap == Catch::Approx(charge).margin(1e-9));
        }
    }

    SECTION("rejections list every violation at once") {
        CorrosionParams bad = p;
        bad.epsilon = 0.0;
        CHECK_THROWS_AS(build_corrosion(grid, bad), std::invalid_argument);

        CorrosionParams badflux = p;
        badflux.species[1].left.m = -1.0;
        CHECK_THROWS_AS(build_corrosion(grid, badflux), std::invalid_argument);

        CorrosionParams negu0 = p;
        negu0.species[0].u0[3] = -0.1;
        CHECK_THROWS_AS(build_corrosion(grid, negu0), std::invalid_argument);

        CorrosionParams multi = p;
        multi.epsilon = -1.0;
        multi.species[2].right.a = 2.0;
        multi.species[0].u0[0] = -0.5;
        try {
            build_corrosion(grid, multi);
            FAIL("expected rejection");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            CHECK(msg.find("epsilon") != std::string::npos);
            CHECK(msg.find("a must lie in [0,1]") != std::string::npos);
            CHECK(msg.find("nonnegative") != std::string::npos);
        }
    }

    SECTION("arbitrary voltage drops are accepted") {
        CorrosionParams drops = p;
        drops.delta_v0 = -37.5;
        drops.delta_v1 = 112.0;
        CHECK_NOTHROW(build_corrosion(grid, drops));
    }

    SECTION("zero densities and zero charge leave the affine Robin potential") {
        CorrosionParams affine = p;
        affine.zeta = 0.0;
        affine.A0 = 0.25;
        affine.A1 = -0.4;
        affine.delta_v0 = 0.3;
        affine.delta_v1 = 0.1;
        const System sys = build_corrosion(grid, affine);
        const std::vector<std::vector<double>> zeros(3, std::vector<double>(grid.size(), 0.0));
        const auto V = sys.potential.apply(0.0, zeros);
        // (V - A0 V')(0) = dv0, (V - A1 V')(1) = psi - dv1, V'' = 0
        const double b = (affine.psi - affine.delta_v1 - affine.delta_v0) / (1.0 + affine.A0 - affine.A1);
        const double a = affine.delta_v0 + affine.A0 * b;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(V.values[i] == Catch::Approx(a + b * grid.cell_centers[i]).margin(1e-12));
        }
    }
}

TEST_CASE("self-gravitation preset") {
    const Grid2D grid(16, 16);

    SECTION("zero initial data stays identically zero") {
        SelfGravParams p;
        p.u0.assign(grid.size(), 0.0);
        auto built = build_self_grav(grid, p);
        RunSettings rs;
        rs.T = 0.05;
        rs.step.dt = 0.01;
        const auto res = run_simulation(built.system, rs);
        REQUIRE(res.ok);
        for (double v : res.final_state.densities[0]) CHECK(v == 0.0);
    }

    SECTION("negative cells are rejected") {
        SelfGravParams p;
        p.u0.assign(grid.size(), 0.01);
        p.u0[5] = -1e-9;
        CHECK_THROWS_AS(build_self_grav(grid, p), std::invalid_argument);
    }

    SECTION("small bump is flagged as small-data") {
        SelfGravParams p;
        p.u0.assign(grid.size(), 0.0);
        p.u0[grid.index(8, 8)] = 0.01 / grid.cell_volume() * 0.01;  // L1 mass 1e-4
        auto built = build_self_grav(grid, p);
        CHECK(built.gn_constant > 0.0);
        CHECK(built.threshold == Catch::Approx(1.0 / (2.0 * built.gn_constant)));
        CHECK(built.u0_l1 == Catch::Approx(1e-4));
        CHECK(built.small_data);
    }
}

TEST_CASE("generic drift preset") {
    const Grid1D grid = build_grid_1d(16);

    SECTION("single species, no atoms reduces to zero-flux drift-diffusion") {
        GenericParams p;
        GenericSpeciesParams sp;
        sp.alpha = 0.5;
        sp.beta = 1.0;
        sp.u0.assign(grid.size(), 0.3);
        p.species.push_back(sp);
        const System sys = build_generic(grid, p);
        CHECK(sys.species[0].flux.kind == FluxKind::Zero);
        RunSettings rs;
        rs.T = 0.05;
        rs.step.dt = 0.01;
        const auto res = run_simulation(sys, rs);
        REQUIRE(res.ok);
        CHECK(res.records.back().species[0].mass == Catch::Approx(0.3).margin(1e-12));
    }

    SECTION("compliant atoms pass, f > 0 is rejected with a witness") {
        GenericParams p;
        GenericSpeciesParams sp;
        sp.alpha = 1.0;
        sp.beta = -1.0;
        sp.R = 1.0;
        sp.atoms.atoms.push_back({0.4, 1.0});
        sp.f = make_f_profile("const_neg", 1.0);
        sp.g = make_g_profile("linear_excess", 1.0, sp.R);
        sp.u0.assign(grid.size(), 0.5);
        p.species.push_back(sp);
        CHECK_NOTHROW(build_generic(grid, p));

        GenericParams bad = p;
        bad.species[0].f = [](double, double, double) { return +0.5; };  // (D-1) violated
        try {
            build_generic(grid, bad);
            FAIL("expected a (D-1) rejection");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("(D-1)") != std::string::npos);
        }
    }

    SECTION("rho out of range is rejected") {
        GenericParams p;
        GenericSpeciesParams sp;
        sp.rho = 3.5;
        sp.u0.assign(grid.size(), 0.1);
        p.species.push_back(sp);
        CHECK_THROWS_AS(build_generic(grid, p), std::invalid_argument);
    }
}

TEST_CASE("configs round-trip through serialization unchanged") {
    const char* docs[] = {
        R"({"preset":"corrosion","grid":{"n_cells":32},"time":{"T":0.5,"dt":0.01},
            "params":{"epsilon":0.2,"psi":0.4,
              "species":[{"u0":{"form":"constant","value":0.3}},
                         {"u0":{"form":"cosine","mean":0.5,"modes":[[1,0.25]]}},
                         {"u0":{"form":"bump","amplitude":0.2,"center":0.4,"width":0.05}}]}})",
        R"({"preset":"self-grav","grid":{"nx":12,"ny":12},"time":{"T":0.2,"dt":0.02},
            "params":{"p":4,"u0":{"form":"gaussian","amplitude":0.01,"sigma":0.2}}})",
        R"({"preset":"generic-drift","params":{"species":[{"alpha":1.0,"beta":-0.5,
              "atoms":[{"s":0.25,"theta":2.0}],"u0":{"form":"constant","value":0.2}}]}})",
        R"({"preset":"heat-neumann","params":{"modes":[1.0,0.5]},"sweep":{"parameters":{"time.dt":[0.01,0.02]}}})",
    };
    for (const char* doc : docs) {
        const RunConfig c1 = parse_run_config(json::parse(doc));
        const json j1 = to_json(c1);
        const RunConfig c2 = parse_run_config(j1);
        const json j2 = to_json(c2);
        CHECK(j1 == j2);
    }
}

TEST_CASE("built systems from configs validate end to end") {
    const json doc = {
        {"preset", "corrosion"},
        {"grid", {{"n_cells", 16}}},
        {"time", {{"T", 0.05}, {"dt", 0.01}}},
        {"params",
         {{"epsilon", 0.1},
          {"species",
           json::array({{{"u0", {{"form", "constant"}, {"value", 0.4}}}},
                        {{"u0", {{"form", "constant"}, {"value", 0.4}}}},
                        {{"u0", {{"form", "constant"}, {"value", 0.4}}}}})}}},
    };
    const RunConfig cfg = parse_run_config(doc);
    const BuiltSystem built = build_from_config(cfg);
    CHECK(built.system.species.size() == 3);
    CHECK(built.settings.T == Catch::Approx(0.05));

    json bad = doc;
    bad["params"]["species"][0]["u0"]["value"] = -0.4;
    CHECK_THROWS_AS(build_from_config(parse_run_config(bad)), std::invalid_argument);
}
