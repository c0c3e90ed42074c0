#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "driftdiff/oracles.hpp"
#include "driftdiff/presets.hpp"
#include "driftdiff/simulate.hpp"

using namespace driftdiff;

TEST_CASE("newton oracle equals the direct solve on linear diffusion") {
    const Grid1D grid = build_grid_1d(24);
    System sys = build_heat_neumann(grid, {1.0, 0.8});
    SystemState state = make_initial_state(sys);
    StepParams params;
    params.dt = 0.01;

    // alpha = 0, sigma = 0: the implicit system is linear, Newton converges
    // in a single iteration
    NewtonOptions opts;
    opts.max_iterations = 2;
    const SystemState newton = dense_newton_step(sys, state, params, opts);
    const auto [picard, report] = assemble_step(sys, state, params);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(newton.densities[0][i] == Catch::Approx(picard.densities[0][i]).margin(1e-12));
    }
}

TEST_CASE("newton oracle agrees with the Picard step on coupled corrosion configs") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Grid1D grid = build_grid_1d(12);
    for (int trial = 0; trial < 3; ++trial) {
        CorrosionParams p;
        p.epsilon = 0.1 + 0.3 * unit(rng);
        p.psi = unit(rng) - 0.5;
        p.zeta = 0.3 * unit(rng);
        for (auto& sp : p.species) {
            sp.left.u_max = 0.5 + unit(rng);
            sp.right = sp.left;
            sp.u0.assign(grid.size(), 0.2 + 0.5 * unit(rng));
        }
        System sys = build_corrosion(grid, p);
        SystemState state = make_initial_state(sys);
        StepParams params;
        params.dt = 0.01;
        params.picard_tol = 1e-10;
        const auto [picard, report] = assemble_step(sys, state, params);
        const SystemState newton = dense_newton_step(sys, state, params);
        double gap = 0.0;
        for (int s = 0; s < 3; ++s) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                gap = std::max(gap, std::abs(picard.densities[s][i] - newton.densities[s][i]));
            }
        }
        CHECK(gap <= 10.0 * params.picard_tol);
    }
}

TEST_CASE("newton oracle agrees with the Picard step on tiny self-gravitation grids") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Grid2D grid(5, 5);
    for (int trial = 0; trial < 3; ++trial) {
        SelfGravParams p;
        p.p = 2 + 2 * trial;
        p.gn_samples = 10;
        p.u0.resize(grid.size());
        for (double& v : p.u0) v = 0.2 * unit(rng);
        System sys = build_self_grav(grid, p).system;
        SystemState state = make_initial_state(sys);
        StepParams params;
        params.dt = 0.01;
        params.picard_tol = 1e-10;
        const auto [picard, report] = assemble_step(sys, state, params);
        const SystemState newton = dense_newton_step(sys, state, params);
        double gap = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            gap = std::max(gap, std::abs(picard.densities[0][i] - newton.densities[0][i]));
        }
        CHECK(gap <= 10.0 * params.picard_tol);
    }
}

TEST_CASE("newton oracle enforces its preconditions") {
    System sys = build_heat_neumann(build_grid_1d(64), {1.0});
    SystemState state = make_initial_state(sys);
    CHECK_THROWS_AS(dense_newton_step(sys, state, StepParams{}), std::invalid_argument);
}

TEST_CASE("quadrature poisson: affine part and impulse symmetry") {
    RobinPoissonSpec spec;
    spec.A0 = -0.3;
    spec.A1 = 0.6;
    spec.V0 = 1.0;
    spec.V1 = 2.0;
    const Grid1D grid = build_grid_1d(20);

    const auto affine = quadrature_poisson(spec, grid, std::vector<double>(grid.size(), 0.0));
    const double det = 1.0 + spec.A1 - spec.A0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.cell_centers[i];
        CHECK(affine.values[i] == Catch::Approx((x - spec.A0) / det * (spec.V1 - spec.V0) + spec.V0).margin(1e-13));
    }

    // impulse response: V at cell i from impulse at j equals V at j from
    // impulse at i (kernel symmetry)
    RobinPoissonSpec hom = spec;
    hom.V0 = 0.0;
    hom.V1 = 0.0;
    std::vector<double> e5(grid.size(), 0.0), e13(grid.size(), 0.0);
    e5[5] = 1.0;
    e13[13] = 1.0;
    const auto from5 = quadrature_poisson(hom, grid, e5);
    const auto from13 = quadrature_poisson(hom, grid, e13);
    CHECK(from5.values[13] == Catch::Approx(from13.values[5]).margin(1e-14));
}

TEST_CASE("heat oracle: series values and solver convergence") {
    const std::vector<double> coeffs{1.0, 1.0};
    CHECK(heat_neumann_analytic(0.25, 0.0, coeffs) == Catch::Approx(1.0 + std::cos(M_PI * 0.25)));
    CHECK(heat_neumann_analytic(0.4, 50.0, coeffs) == Catch::Approx(1.0).margin(1e-12));

    const Grid1D grid = build_grid_1d(64);
    System sys = build_heat_neumann(grid, coeffs);
    RunSettings rs;
    rs.T = 0.1;
    rs.step.dt = 1e-4;
    const auto res = run_simulation(sys, rs);
    REQUIRE(res.ok);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        err = std::max(err, std::abs(res.final_state.densities[0][i] -
                                     heat_neumann_analytic(grid.cell_centers[i], rs.T, coeffs)));
    }
    CHECK(err <= 2.0 * (M_PI * M_PI / 8.0) * grid.cell_width * grid.cell_width);  // C h^2 with margin
}
