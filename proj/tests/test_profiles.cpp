#include <cmath>

#include "doctest.h"
#include "tpnls/closedform.hpp"
#include "tpnls/errors.hpp"
#include "tpnls/profiles.hpp"

using namespace tpnls;

namespace {

bool nonincreasing(const ProfileSolution& s) {
    for (std::size_t i = 1; i < s.phi.size(); ++i)
        if (s.phi[i] > s.phi[i - 1]) return false;
    return true;
}

ShootOptions tight() { return {1e-10, 1e-10, 20'000'000}; }

const ModelParams kBench[] = {{kFF, 1.0, 1.7}, {kDF, 1.0, -1.0}, {kFD, 0.1, 0.5}, {kDD, 0.5, -3.0}};

}  // namespace

TEST_CASE("grid spec") {
    CHECK(GridSpec{}.intervals() == 5000);
    CHECK(GridSpec{50.0, 1e-3, true}.effective_T() == 20.0);
    CHECK(GridSpec{50.0, 1e-3, false}.effective_T() == 50.0);
    CHECK(GridSpec{50.0, 2e-3, true}.effective_T() == 50.0);
}

TEST_CASE("quadrature profile of the pure cubic") {
    for (double w : {1.0, 4.0}) {
        const ProfileSolution s = quadrature_profile(GeneralCoeffs{w, 0, 1, 0});
        double worst = 0.0;
        for (std::size_t i = 0; i < s.t.size(); ++i)
            worst = std::max(worst, std::abs(s.phi[i] - phi_single(3.0, w, s.t[i])));
        CHECK(worst < 1e-8);
        CHECK(nonincreasing(s));
        CHECK(mass(s) == doctest::Approx(4.0 * std::sqrt(w)).epsilon(1e-8));
    }
}

TEST_CASE("mass of sampled profiles") {
    // exact sech profile with an odd interval count exercises the 3/8 tail
    ProfileSolution s;
    s.dt = 0.01;
    for (int i = 0; i <= 3001; ++i) {
        s.t.push_back(i * s.dt);
        s.phi.push_back(phi_single(3.0, 1.0, i * s.dt));
    }
    CHECK(mass(s) == doctest::Approx(4.0).epsilon(1e-8));
    s.t.pop_back();
    s.phi.pop_back();
    CHECK(mass(s) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("four methods agree at the benchmark points") {
    for (const ModelParams& p : kBench) {
        CAPTURE(p.signs.label());
        CAPTURE(p.omega);
        CAPTURE(p.gamma);
        const GeneralCoeffs c = p.coeffs();
        const ProfileSolution q = quadrature_profile(c);
        const ProfileSolution b = bvp_solve(c, q, 0.01);
        const ProfileSolution sh = crop(shoot(c, 50.0, tight()), 0.01);
        const ProfileSolution pc = picard_solve(c, sh, 0.01);
        const ProfileSolution* all[] = {&q, &b, &sh, &pc};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) CHECK(sup_distance(*all[i], *all[j]) <= 1e-4);
        CHECK(nonincreasing(q));
        CHECK(nonincreasing(b));
        CHECK(nonincreasing(pc));
        CHECK(b.bc_residual < 1e-4);
        CHECK(b.phi.back() == 0.0);
        CHECK(q.phi[0] == doctest::Approx(require_phi0(p)).epsilon(1e-14));
    }
}

TEST_CASE("energy identity along the profile") {
    for (const ModelParams& p : kBench) {
        CAPTURE(p.signs.label());
        const GeneralCoeffs c = p.coeffs();
        // The central-difference check is itself O(dt^2); profiles that are
        // more accurate than that need the finer grid to show it.
        const ProfileSolution q = quadrature_profile(c, {50.0, 0.005, true});
        const ProfileSolution b = bvp_solve(c, quadrature_profile(c), 0.01);
        const ProfileSolution pc = picard_solve(c, q, 0.005);
        CHECK(q.energy_residual <= 1e-4);
        CHECK(b.energy_residual <= 1e-4);
        CHECK(pc.energy_residual <= 1e-4);
    }
}

TEST_CASE("exponential tail") {
    for (const ModelParams& p : kBench) {
        CAPTURE(p.signs.label());
        const GeneralCoeffs c = p.coeffs();
        const GridSpec grid{20.0, 0.01, true};
        for (const ProfileSolution& s : {quadrature_profile(c, grid), bvp_solve(c, quadrature_profile(c, grid), 0.01)}) {
            const double T = s.T();
            const std::size_t i0 = std::size_t(std::lround(0.6 * T / s.dt));
            const std::size_t i1 = std::size_t(std::lround(0.9 * T / s.dt));
            const double slope = (std::log(s.phi[i1]) - std::log(s.phi[i0])) / (s.t[i1] - s.t[i0]);
            CHECK(slope == doctest::Approx(-std::sqrt(p.omega)).epsilon(0.05));
        }
    }
}

TEST_CASE("Newton BVP reproduces the double-power closed form") {
    const DoublePowerFamily fam{1.0, 1.0};
    const GeneralCoeffs c = fam.general_coeffs();
    const ProfileSolution s = solve_profile(c, {100.0, 0.01, true});
    double worst = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        worst = std::max(worst, std::abs(s.phi[i] - double_power_profile(fam, s.t[i])));
    CHECK(worst <= 1e-6);
    CHECK(s.phi[0] == doctest::Approx(4.0 / 9.0).epsilon(1e-5));
}

TEST_CASE("Picard from the exact solution stays put") {
    const GeneralCoeffs c = ModelParams{kFF, 1.0, 1.7}.coeffs();
    BvpOptions bo;
    bo.stencil = Stencil::Numerov;
    const ProfileSolution exact = bvp_solve(c, quadrature_profile(c), 0.01, bo);
    const ProfileSolution pc = picard_solve(c, exact, 0.01);
    CHECK(sup_distance(pc, exact) < 1e-12);
    CHECK(pc.iterations <= 3);
}

TEST_CASE("Picard at dt = 0.1 from a cropped shot") {
    for (double w : {0.2, 0.5, 1.0}) {
        CAPTURE(w);
        const GeneralCoeffs c = ModelParams{kFF, w, 1.7}.coeffs();
        const ProfileSolution u0 = crop(shoot(c, 50.0), 0.1);
        const ProfileSolution pc = picard_solve(c, u0, 0.1);
        CHECK(nonincreasing(pc));
        CHECK(pc.phi.front() == doctest::Approx(require_phi0(c)));
        CHECK(pc.phi.back() == 0.0);
        CHECK(sup_distance(pc, quadrature_profile(c)) < 1e-3);
    }
    const GeneralCoeffs big = ModelParams{kFF, 10.0, 10.0}.coeffs();
    const ProfileSolution u0 = crop(shoot(big, 5.0), 0.01);
    const ProfileSolution pc = picard_solve(big, u0, 0.01);
    CHECK(nonincreasing(pc));
    CHECK(pc.T() == doctest::Approx(5.0));
    CHECK(pc.phi[std::size_t(std::lround(4.0 / 0.01))] < 1e-4 * pc.phi0);
}

TEST_CASE("stop times of the shooting method") {
    const double expected[] = {13.30625, 10.63551, 8.375157, 7.429009};
    const double omegas[] = {5.0, 10.0, 15.0, 20.0};
    double prev = 1e9;
    for (int k = 0; k < 4; ++k) {
        const ShootResult r = shoot(ModelParams{kFF, omegas[k], 5.0}, 50.0);
        CHECK(r.stop_reason == StopReason::StepUnderflow);
        CHECK(r.stop_time == doctest::Approx(expected[k]).epsilon(1e-6));
        CHECK(r.stop_time < prev);
        prev = r.stop_time;
        const ProfileSolution s = crop(r, 0.01);
        CHECK(s.T() == doctest::Approx(50.0));
        CHECK(nonincreasing(s));
        for (std::size_t i = 0; i < s.t.size(); ++i)
            if (s.t[i] > r.stop_time) CHECK(s.phi[i] == 0.0);
    }
}

TEST_CASE("crop") {
    const ProfileSolution q = quadrature_profile(ModelParams{kFF, 1.0, 1.7});
    const ProfileSolution once = crop(q);
    CHECK(once.phi == q.phi);
    CHECK(crop(once).phi == once.phi);

    const ProfileSolution shot = crop(shoot(ModelParams{kFF, 0.17, 1.8}, 50.0), 0.01);
    CHECK(crop(shot).phi == shot.phi);
    CHECK(nonincreasing(shot));
    CHECK(shot.phi.back() == 0.0);

    ProfileSolution bump = q;
    bump.phi[100] = bump.phi[99] + 1.0;
    const ProfileSolution cut = crop(bump);
    CHECK(cut.phi[99] == q.phi[99]);
    CHECK(cut.phi[100] == 0.0);
    CHECK(cut.phi.back() == 0.0);
}

TEST_CASE("gamma = 1.8 near the double zero") {
    const double w0 = 22.0 / 135.0;
    // raw shots turn around after leaving the plateau
    int turned = 0;
    double prev_plateau = 0.0;
    for (double w : {0.15, 0.16, 0.162}) {
        const ShootResult r = shoot(ModelParams{kFF, w, 1.8}, 50.0);
        int turns = 0;
        for (std::size_t i = 1; i < r.dphi.size(); ++i) turns += (r.dphi[i - 1] < 0.0) != (r.dphi[i] < 0.0);
        turned += turns > 0;
        const ProfileSolution s = crop(r, 0.01);
        std::size_t m = 0;
        while (m < s.phi.size() && s.phi[m] > 0.9 * s.phi0) ++m;
        CHECK(s.t[m] > prev_plateau);
        prev_plateau = s.t[m];
    }
    CHECK(turned > 0);

    for (double w : {0.15, 0.16, 0.17, 0.2}) {
        CAPTURE(w);
        const ProfileSolution s = solve_profile(ModelParams{kFF, w, 1.8}.coeffs());
        CHECK(nonincreasing(s));
        if (w < w0) {
            CHECK(s.phi0 < 2.0 / 3.0);
        } else {
            CHECK(s.phi0 > 11.0 / 12.0);
        }
    }
    CHECK(require_phi0(ModelParams{kFF, 0.16, 1.8}) > require_phi0(ModelParams{kFF, 0.15, 1.8}));
    CHECK(require_phi0(ModelParams{kFF, 0.2, 1.8}) > require_phi0(ModelParams{kFF, 0.17, 1.8}));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(quadrature_profile(ModelParams{kFD, 1.0, 0.0}), NotExistsError);
    CHECK_THROWS_AS(shoot(ModelParams{kFF, 1.0, 1.7}, -1.0), DomainError);
    const ProfileSolution a = quadrature_profile(ModelParams{kFF, 1.0, 1.7});
    const ProfileSolution b = quadrature_profile(ModelParams{kFF, 1.0, 1.7}, {50.0, 0.03, true});
    CHECK_THROWS_AS(sup_distance(a, quadrature_profile(ModelParams{kFF, 1.0, 1.7}, {50.0, 0.015, true})), DomainError);
    CHECK(sup_distance(a, b) < 1e-8);
}
