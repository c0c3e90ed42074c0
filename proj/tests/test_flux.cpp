#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "driftdiff/flux.hpp"

using namespace driftdiff;

namespace {
const BoundaryPoint kLeft{0, 0.0, 0.0};
const BoundaryPoint kRight{1, 1.0, 0.0};
}  // namespace

TEST_CASE("corrosion flux evaluation examples") {
    CorrosionFluxParams p;
    p.m = 1.0;
    p.k = 1.0;
    p.u_max = 2.0;
    // gamma = -1, psi = 0: sigma = -(1+1)*0.5 + 1*2 = 1
    CHECK(corrosion_sigma(p, -1.0, 0.5, 0.0) == Catch::Approx(1.0));

    // equilibrium value at v = u_max with vanishing k (formula check)
    CorrosionFluxParams eq = p;
    eq.k = 0.0;
    CHECK(corrosion_sigma(eq, -1.0, 2.0, 0.0) == Catch::Approx(0.0).margin(1e-15));

    const FluxSpec zero = zero_flux();
    CHECK(eval_flux(zero, 0.3, kLeft, -4.0, 7.0) == 0.0);

    const FluxSpec flux = corrosion_flux(p, p, -1.0, 0.0);
    CHECK(eval_flux(flux, 0.0, kLeft, 0.5, 0.0) == Catch::Approx(1.0));
    CHECK_THROWS_AS(eval_flux(flux, 0.0, kLeft, std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("corrosion flux sign structure and monotonicity") {
    CorrosionFluxParams p;
    p.m = 0.8;
    p.k = 1.3;
    p.a = 0.4;
    p.b = 0.9;
    p.u_max = 1.7;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> psi_dist(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double psi = psi_dist(rng);
        for (double gamma : {-1.0, 3.0, 1.0}) {
            CHECK(corrosion_sigma(p, gamma, 0.0, psi) > 0.0);
            CHECK(corrosion_sigma(p, gamma, p.u_max, psi) <= 0.0);
            const double v = 2.0 * psi_dist(rng);
            const double slope = (corrosion_sigma(p, gamma, v + 1e-6, psi) -
                                  corrosion_sigma(p, gamma, v - 1e-6, psi)) / 2e-6;
            CHECK(slope < 0.0);
        }
    }
}

TEST_CASE("flux truncation: identity below p, zero beyond 2p, contraction") {
    CorrosionFluxParams p;
    const FluxSpec base = corrosion_flux(p, p, 3.0, 0.5);
    const FluxSpec trunc = truncate_flux(base, 10);
    CHECK(trunc.lambda_T == base.lambda_T);
    CHECK(trunc.height == base.height);

    // h = 1 on |v| <= p: values bit-identical
    CHECK(eval_flux(trunc, 0.2, kLeft, 5.0, 0.3) == eval_flux(base, 0.2, kLeft, 5.0, 0.3));
    CHECK(eval_flux(trunc, 0.2, kRight, 25.0, 0.3) == 0.0);

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> v_dist(-40.0, 40.0), psi_dist(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = v_dist(rng), psi = psi_dist(rng);
        CHECK(std::abs(eval_flux(trunc, 0.0, kLeft, v, psi)) <= std::abs(eval_flux(base, 0.0, kLeft, v, psi)));
    }
    CHECK_THROWS_AS(truncate_flux(base, 0), std::invalid_argument);
}

TEST_CASE("cutoff profile shape") {
    CHECK(cutoff_h(0.7) == 1.0);
    CHECK(cutoff_h(-1.0) == 1.0);
    CHECK(cutoff_h(2.0) == 0.0);
    CHECK(cutoff_h(-3.1) == 0.0);
    for (double x = 1.05; x < 2.0; x += 0.05) {
        CHECK(cutoff_h(x) > 0.0);
        CHECK(cutoff_h(x) < 1.0);
        CHECK(cutoff_h(x + 0.05) <= cutoff_h(x));  // monotone on the shoulder
    }
}

TEST_CASE("bounded non-dissipativity sampler") {
    const auto zero_rep = check_bounded_nondissipative(zero_flux(), 200);
    CHECK(zero_rep.passed);
    CHECK(zero_rep.lambda_T == 0.0);

    CorrosionFluxParams p;
    p.m = 1.2;
    p.k = 0.7;
    p.u_max = 1.4;
    const FluxSpec corr = corrosion_flux(p, p, 3.0, 0.8);
    CHECK(corr.height == p.u_max);
    CHECK(corr.lambda_T == 0.0);
    CHECK(check_bounded_nondissipative(corr, 2000).passed);

    // outflow below zero violates the chi- condition
    FluxSpec bad;
    bad.evaluator = [](double, const BoundaryPoint&, double, double) { return -1.0; };
    bad.kind = FluxKind::Custom;
    bad.height = 1.0;
    const auto bad_rep = check_bounded_nondissipative(bad, 200);
    CHECK_FALSE(bad_rep.passed);
    REQUIRE(bad_rep.witness.has_value());
    CHECK(bad_rep.witness->condition == "sign");
    CHECK(bad_rep.witness->v < 0.0);

    // inflow above the height with lambda_T = 0 violates the height bound
    FluxSpec pushy;
    pushy.evaluator = [](double, const BoundaryPoint&, double, double) { return 1.0; };
    pushy.kind = FluxKind::Custom;
    pushy.height = 1.0;
    pushy.lambda_T = 0.0;
    const auto pushy_rep = check_bounded_nondissipative(pushy, 200);
    CHECK_FALSE(pushy_rep.passed);
    REQUIRE(pushy_rep.witness.has_value());
    CHECK(pushy_rep.witness->condition == "height");
    // same flux declared with lambda_T = 1 is compliant
    CHECK(check_bounded_nondissipative(constant_inflow_flux(1.0), 200).passed);
}

TEST_CASE("growth-class sampler") {
    const auto zero_rep = check_growth_class(zero_flux(), 0.0, 1.0, 600);
    CHECK(zero_rep.k_empirical == 0.0);
    CHECK_FALSE(zero_rep.unbounded_flag);

    // globally Lipschitz flux: finite K_M independent of the sampling range
    FluxSpec lip;
    lip.evaluator = [](double, const BoundaryPoint&, double v, double psi) { return -2.0 * v + 0.5 * psi; };
    lip.kind = FluxKind::Custom;
    lip.height = 1.0;
    const auto lip_rep = check_growth_class(lip, 0.0, 1.0, 1200);
    CHECK(lip_rep.k_empirical > 0.0);
    CHECK(lip_rep.k_empirical < 10.0);
    CHECK_FALSE(lip_rep.unbounded_flag);

    CorrosionFluxParams p;
    const auto corr_rep = check_growth_class(corrosion_flux(p, p, -1.0, 0.0), 0.0, 1.0, 1200);
    CHECK(corr_rep.k_empirical > 0.0);
    CHECK(std::isfinite(corr_rep.k_empirical));
    CHECK_FALSE(corr_rep.unbounded_flag);

    // quadratic flux checked against rho = 0 keeps growing with |v|
    FluxSpec quad;
    quad.evaluator = [](double, const BoundaryPoint&, double v, double) { return -v * std::abs(v); };
    quad.kind = FluxKind::Custom;
    quad.height = 1.0;
    const auto quad_rep = check_growth_class(quad, 0.0, 1.0, 2400);
    CHECK(quad_rep.unbounded_flag);
    // the same flux has bounded constants in its true growth class rho = 1
    CHECK_FALSE(check_growth_class(quad, 1.0, 1.0, 2400).unbounded_flag);
}

TEST_CASE("measure-driven drift fluxes") {
    MeasureAtomList empty;
    const auto none = measure_drift_flux([](double, double, double) { return -1.0; },
                                         [](double v, double) { return v; }, empty, 1.0);
    CHECK(none.kind == FluxKind::Zero);
    CHECK(eval_flux(none, 0.0, kLeft, 3.0, 0.0) == 0.0);

    const double R = 1.5;
    MeasureAtomList one;
    one.atoms.push_back({0.3, 1.0});
    const auto single = measure_drift_flux([](double, double, double) { return -1.0; },
                                           [R](double v, double) { return v - R; }, one, R);
    CHECK(eval_flux(single, 0.0, kLeft, 2.5, 0.0) == Catch::Approx(R - 2.5));
    CHECK(eval_flux(single, 0.0, kLeft, R, 0.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(eval_flux(single, 0.0, kLeft, -1.0, 0.0) == Catch::Approx(R + 1.0));
    CHECK(check_bounded_nondissipative(single, 1000).passed);

    MeasureAtomList two;
    two.atoms.push_back({0.2, 2.0});
    two.atoms.push_back({0.9, 3.0});
    const auto weighted = measure_drift_flux([](double, double, double) { return -1.0; },
                                             [](double, double) { return 1.0; }, two, 0.0);
    CHECK(eval_flux(weighted, 0.0, kRight, 0.4, 0.0) == Catch::Approx(-5.0));

    MeasureAtomList negative;
    negative.atoms.push_back({0.5, -1.0});
    CHECK_THROWS_AS(measure_drift_flux([](double, double, double) { return -1.0; },
                                       [](double v, double) { return v; }, negative, 0.0),
                    std::invalid_argument);
}

TEST_CASE("validators do not mutate the spec") {
    CorrosionFluxParams p;
    const FluxSpec flux = corrosion_flux(p, p, 1.0, 0.0);
    const double before = eval_flux(flux, 0.1, kLeft, 0.4, 0.2);
    (void)check_bounded_nondissipative(flux, 500);
    (void)check_growth_class(flux, 0.0, 1.0, 500);
    CHECK(eval_flux(flux, 0.1, kLeft, 0.4, 0.2) == before);
    CHECK(flux.lambda_T == 0.0);
    CHECK(flux.height == p.u_max);
}
