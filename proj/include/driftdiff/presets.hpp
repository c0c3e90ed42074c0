// Ready-to-run systems: the three-species corrosion model on (0,1), the
// mollified self-gravitation model on a rectangle, a generic n-species
// measure-drift template, and the heat-Neumann oracle configuration.
#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "driftdiff/diagnostics.hpp"
#include "driftdiff/flux.hpp"
#include "driftdiff/potential.hpp"
#include "driftdiff/solver.hpp"

namespace driftdiff {

// --- corrosion (three species, gamma = -1, 3, 1) ----------------------------

struct CorrosionSpeciesParams {
    CorrosionFluxParams left;
    CorrosionFluxParams right;
    std::vector<double> u0;
};

struct CorrosionParams {
    double epsilon = 0.1;  // time scales eps^{2-i}
    double lambda = 1.0;
    double zeta = 0.0;
    double psi = 0.0;  // applied potential
    double delta_v0 = 0.0;
    double delta_v1 = 0.0;  // voltage drops: arbitrary reals accepted
    double A0 = 0.0;
    double A1 = 0.0;
    std::array<CorrosionSpeciesParams, 3> species;
    std::uint64_t validator_seed = 20240711;
};

inline constexpr std::array<double, 3> corrosion_gammas{-1.0, 3.0, 1.0};

// Collects every violated invariant before rejecting, so a bad parameter
// block reports all problems at once.
inline void validate_corrosion_params(const CorrosionParams& p) {
    std::vector<std::string> problems;
    if (!(p.epsilon > 0.0)) problems.push_back("epsilon must be > 0");
    if (!(p.lambda > 0.0)) problems.push_back("lambda must be > 0");
    if (std::abs(1.0 + p.A0 - p.A1) <= 1e-12) problems.push_back("degenerate Robin determinant 1 + A0 - A1");
    const char* sides[2] = {"left", "right"};
    for (int i = 0; i < 3; ++i) {
        for (int side = 0; side < 2; ++side) {
            const CorrosionFluxParams& fp = side == 0 ? p.species[i].left : p.species[i].right;
            const std::string where = "species " + std::to_string(i + 1) + " " + sides[side] + ": ";
            if (!(fp.m > 0.0)) problems.push_back(where + "m must be > 0");
            if (!(fp.k > 0.0)) problems.push_back(where + "k must be > 0");
            if (!(fp.u_max > 0.0)) problems.push_back(where + "u_max must be > 0");
            if (!(fp.a >= 0.0 && fp.a <= 1.0)) problems.push_back(where + "a must lie in [0,1]");
            if (!(fp.b >= 0.0 && fp.b <= 1.0)) problems.push_back(where + "b must lie in [0,1]");
        }
        for (double v : p.species[i].u0) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                problems.push_back("species " + std::to_string(i + 1) + ": initial condition must be nonnegative");
                break;
            }
        }
    }
    if (!problems.empty()) {
        std::string msg = "build_corrosion: ";
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (i) msg += "; ";
            msg += problems[i];
        }
        throw std::invalid_argument(msg);
    }
}

inline System build_corrosion(const Grid1D& grid, const CorrosionParams& p) {
    validate_corrosion_params(p);

    RobinPoissonSpec rspec;
    rspec.A0 = p.A0;
    rspec.A1 = p.A1;
    rspec.V0 = p.delta_v0;
    rspec.V1 = p.psi - p.delta_v1;
    rspec.sign_convention = RobinSign::MinusDerivative;
    rspec.lambda = p.lambda;
    rspec.charge_weights = {corrosion_gammas[0], corrosion_gammas[1], corrosion_gammas[2]};
    rspec.background = p.zeta;
    rspec.validate();

    System sys;
    sys.kind = ModelKind::Corrosion1D;
    sys.grid1 = grid;
    // -lambda d_xx V = gamma.u + zeta
    sys.potential = PotentialOperator::robin_1d(grid, rspec, -1.0);

    const std::array<std::string, 3> names{"electrons", "cations", "vacancies"};
    for (int i = 0; i < 3; ++i) {
        SpeciesSpec sp;
        sp.name = names[i];
        sp.alpha = corrosion_gammas[i];
        sp.diffusion = 1.0;
        sp.time_scale = std::pow(p.epsilon, 1.0 - i);  // eps^{2-i}, i = 1..3
        sp.flux = corrosion_flux(p.species[i].left, p.species[i].right, corrosion_gammas[i], p.psi);
        sp.initial_condition = p.species[i].u0;
        sys.species.push_back(std::move(sp));
    }
    sys.validate();

    FluxSamplerOptions opts;
    opts.seed = p.validator_seed;
    for (const auto& sp : sys.species) {
        const auto rep = check_bounded_nondissipative(sp.flux, 400, opts);
        if (!rep.passed) {
            std::ostringstream os;
            os << "build_corrosion: flux for '" << sp.name << "' failed the non-dissipativity sampler at v="
               << rep.witness->v << ", psi=" << rep.witness->psi << " (sigma=" << rep.witness->sigma << ")";
            throw std::invalid_argument(os.str());
        }
    }
    return sys;
}

// --- self-gravitation (n = 1, sigma = 0, mollified Dirichlet Poisson) -------

struct SelfGravParams {
    int p = 8;  // mollification index
    std::vector<double> u0;
    int gn_samples = 120;
    std::uint64_t seed = 20240711;
};

struct SelfGravBuild {
    System system;
    double gn_constant = 0.0;
    double threshold = 0.0;  // 1 / (2 C_GN)
    double u0_l1 = 0.0;
    bool small_data = false;
};

inline SelfGravBuild build_self_grav(const Grid2D& grid, const SelfGravParams& p) {
    SelfGravBuild out;
    System& sys = out.system;
    sys.kind = ModelKind::SelfGrav2D;
    sys.two_dim = true;
    sys.grid2 = grid;
    sys.potential = PotentialOperator::mollified_dirichlet_2d(grid, MollifierSpec{p.p}, {1.0});

    SpeciesSpec sp;
    sp.name = "particles";
    sp.alpha = 1.0;  // flux term u grad V with Delta V = u (attraction)
    sp.diffusion = 1.0;
    sp.time_scale = 1.0;
    sp.flux = zero_flux();  // k = 0, lambda_T = 0
    sp.initial_condition = p.u0;
    sys.species.push_back(std::move(sp));
    sys.validate();

    out.gn_constant = measure_gn_constant(grid, p.gn_samples, p.seed);
    out.threshold = smallness_threshold(out.gn_constant);
    out.u0_l1 = cell_integral(grid, p.u0);
    out.small_data = out.u0_l1 <= out.threshold;
    return out;
}

// --- generic measure-drift template ------------------------------------------

struct GenericSpeciesParams {
    double alpha = 0.0;
    double beta = 0.0;  // charge weight in the Poisson right-hand side
    double rho = 0.0;
    double R = 0.0;  // height of (D-2)
    MeasureAtomList atoms;
    BoundaryProfile f;
    SpeciesProfile g;
    std::vector<double> u0;
    std::string name = "species";
};

struct GenericParams {
    double zeta = 0.0;
    double A0 = 0.0;
    double A1 = 0.0;
    double V0 = 0.0;
    double V1 = 0.0;
    double measure_a = 0.0;
    double measure_b = 1.0;  // support [a, b] of the atoms
    std::vector<GenericSpeciesParams> species;
    std::uint64_t validator_seed = 20240711;
};

// Samples the structural conditions on the atom integrands: f <= 0
// everywhere (D-1), g >= 0 above R (D-2), g <= 0 below 0 (D-3). Throws with
// a witness on the first violation.
inline void validate_measure_profiles(const GenericSpeciesParams& sp, double a, double b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double M = 4.0;
    for (int it = 0; it < 400; ++it) {
        const double s = a + unit(rng) * (b - a);
        const double x = (it % 2 == 0) ? 0.0 : 1.0;
        const double psi = (2.0 * unit(rng) - 1.0) * M;
        const double fv = sp.f(x, psi, s);
        if (fv > 1e-12) {
            std::ostringstream os;
            os << "generic preset '" << sp.name << "': f(" << x << ", " << psi << ", " << s << ") = " << fv
               << " > 0 violates (D-1)";
            throw std::invalid_argument(os.str());
        }
        const double v_hi = sp.R + unit(rng) * (sp.R + 10.0);
        const double g_hi = sp.g(v_hi, s);
        if (g_hi < -1e-12) {
            std::ostringstream os;
            os << "generic preset '" << sp.name << "': g(" << v_hi << ", " << s << ") = " << g_hi
               << " < 0 violates (D-2) above R = " << sp.R;
            throw std::invalid_argument(os.str());
        }
        const double v_lo = -unit(rng) * (sp.R + 10.0);
        const double g_lo = sp.g(v_lo, s);
        if (g_lo > 1e-12) {
            std::ostringstream os;
            os << "generic preset '" << sp.name << "': g(" << v_lo << ", " << s << ") = " << g_lo
               << " > 0 violates (D-3)";
            throw std::invalid_argument(os.str());
        }
    }
}

inline System build_generic(const Grid1D& grid, const GenericParams& p) {
    require(!p.species.empty(), "build_generic: at least one species");
    require(p.measure_b >= p.measure_a, "build_generic: measure support must be ordered");

    RobinPoissonSpec rspec;
    rspec.A0 = p.A0;
    rspec.A1 = p.A1;
    rspec.V0 = p.V0;
    rspec.V1 = p.V1;
    rspec.sign_convention = RobinSign::PlusDerivative;
    rspec.lambda = 1.0;
    rspec.background = p.zeta;
    for (const auto& sp : p.species) rspec.charge_weights.push_back(sp.beta);
    rspec.validate();

    System sys;
    sys.kind = ModelKind::GenericDrift1D;
    sys.grid1 = grid;
    // d_xx V = beta.u + zeta
    sys.potential = PotentialOperator::robin_1d(grid, rspec, 1.0);

    FluxSamplerOptions opts;
    opts.seed = p.validator_seed;
    int idx = 0;
    for (const auto& gp : p.species) {
        require(gp.rho >= 0.0 && gp.rho < 3.0, "build_generic: rho must lie in [0, 3)");
        require(gp.R >= 0.0, "build_generic: R must be >= 0");
        SpeciesSpec sp;
        sp.name = gp.name.empty() ? ("species" + std::to_string(idx)) : gp.name;
        sp.alpha = gp.alpha;
        sp.diffusion = 1.0;
        sp.time_scale = 1.0;
        if (gp.atoms.atoms.empty()) {
            sp.flux = zero_flux();
            sp.flux.height = gp.R;
        } else {
            validate_measure_profiles(gp, p.measure_a, p.measure_b, p.validator_seed + idx);
            sp.flux = measure_drift_flux(gp.f, gp.g, gp.atoms, gp.R, gp.rho);
            const auto rep = check_bounded_nondissipative(sp.flux, 400, opts);
            if (!rep.passed) {
                std::ostringstream os;
                os << "build_generic: flux for '" << sp.name << "' failed the non-dissipativity sampler at v="
                   << rep.witness->v << ", psi=" << rep.witness->psi << " (sigma=" << rep.witness->sigma << ")";
                throw std::invalid_argument(os.str());
            }
        }
        sp.initial_condition = gp.u0;
        sys.species.push_back(std::move(sp));
        ++idx;
    }
    sys.validate();
    return sys;
}

// Named profile families for configs; all satisfy (D-1)-(D-4) by
// construction for nonnegative parameters.
inline BoundaryProfile make_f_profile(const std::string& form, double c, double d = 0.0) {
    require(c >= 0.0, "f profile: c must be >= 0");
    if (form == "const_neg") {
        return [c](double, double, double) { return -c; };
    }
    if (form == "exp_gate") {
        return [c, d](double, double psi, double) { return -c * std::exp(d * psi); };
    }
    throw std::invalid_argument("unknown f profile form '" + form + "'");
}

inline SpeciesProfile make_g_profile(const std::string& form, double scale, double R) {
    require(scale >= 0.0, "g profile: scale must be >= 0");
    if (form == "linear_excess") {
        return [scale, R](double v, double) { return scale * (v - R); };
    }
    if (form == "cubic") {
        require(R == 0.0, "g profile 'cubic' requires R = 0");
        return [scale](double v, double) { return scale * v * v * v; };
    }
    if (form == "tanh_excess") {
        return [scale, R](double v, double) { return scale * std::tanh(v - R); };
    }
    throw std::invalid_argument("unknown g profile form '" + form + "'");
}

// --- heat-Neumann oracle system ----------------------------------------------

// Pure diffusion with zero total boundary flux: the convergence test bed.
// coeffs[k] is the amplitude of cos(k pi x); the sampled initial condition
// must be nonnegative.
inline System build_heat_neumann(const Grid1D& grid, const std::vector<double>& coeffs) {
    System sys;
    sys.kind = ModelKind::HeatNeumann1D;
    sys.grid1 = grid;
    sys.potential = PotentialOperator::none(grid.size());
    SpeciesSpec sp;
    sp.name = "u";
    sp.alpha = 0.0;
    sp.flux = zero_flux();
    sp.initial_condition.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            acc += coeffs[k] * std::cos(k * M_PI * grid.cell_centers[i]);
        }
        sp.initial_condition[i] = acc;
    }
    sys.species.push_back(std::move(sp));
    sys.validate();
    return sys;
}

}  // namespace driftdiff
