#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "tpnls/boundary.hpp"
#include "tpnls/profiles.hpp"
#include "tpnls/stability.hpp"

using namespace tpnls;
using tpnls::test::kAllCases;
using tpnls::test::random_exists;
using tpnls::test::rel_diff;

namespace {

QuadOptions with(JFormula f, double rel_tol = 1e-10) {
    QuadOptions o;
    o.formula = f;
    o.rel_tol = rel_tol;
    return o;
}

constexpr JFormula kForms[] = {JFormula::UnitInterval, JFormula::XForm, JFormula::GaugeForm, JFormula::GaugeFormAlt};

// Single-power masses N(omega) = integral of phi^2 over the line for
// phi'' = omega phi - phi^p, from phi = omega^(1/(p-1)) Q_p(sqrt(omega) x).
double mass_quadratic(double w) { return 6.0 * std::pow(w, 1.5); }
double mass_cubic(double w) { return 4.0 * std::sqrt(w); }
double mass_quartic(double w) {
    return std::pow(w, 1.0 / 6.0) * std::pow(2.5, 2.0 / 3.0) * (2.0 / 3.0) * std::beta(2.0 / 3.0, 0.5);
}

}  // namespace

TEST_CASE("pure-power oracles") {
    for (const JFormula f : kForms) {
        CAPTURE(formula_name(f));
        for (double w : {0.25, 1.0, 4.0}) {
            CAPTURE(w);
            CHECK(stability_j(GeneralCoeffs{w, 0, 1, 0}, with(f)).j == doctest::Approx(2.0 / std::sqrt(w)).epsilon(1e-9));
            // N = 6 w^1.5  =>  J = 9 sqrt(w)
            CHECK(stability_j(GeneralCoeffs{w, 1, 0, 0}, with(f)).j == doctest::Approx(9.0 * std::sqrt(w)).epsilon(1e-9));
            // N ~ w^(1/6)  =>  J = N / (6 w)
            CHECK(stability_j(GeneralCoeffs{w, 0, 0, 1}, with(f)).j ==
                  doctest::Approx(mass_quartic(w) / (6.0 * w)).epsilon(1e-9));
        }
    }
    // sanity of the oracle masses themselves: N'(w) by differencing
    const double h = 1e-5;
    CHECK((mass_cubic(1 + h) - mass_cubic(1 - h)) / (2 * h) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK((mass_quadratic(1 + h) - mass_quadratic(1 - h)) / (2 * h) == doctest::Approx(9.0).epsilon(1e-8));
}

TEST_CASE("formula equivalence at random existence points") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 200; ++k) {
        const ModelParams p = random_exists(kAllCases[k % 4], rng);
        CAPTURE(p.signs.label());
        CAPTURE(p.omega);
        CAPTURE(p.gamma);
        StabilityValue v[4];
        for (int f = 0; f < 4; ++f) v[f] = stability_j(p.coeffs(), with(kForms[f]));
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                const double tol = std::max(1e-8 * std::max(std::abs(v[a].j), std::abs(v[b].j)),
                                            v[a].est_error + v[b].est_error);
                CHECK(std::abs(v[a].j - v[b].j) <= tol);
            }
        }
    }
}

TEST_CASE("named points") {
    const StabilityValue ff = stability_j(ModelParams{kFF, 1.0, 1.7});
    for (const JFormula f : kForms) CHECK(rel_diff(stability_j(ModelParams{kFF, 1.0, 1.7}, with(f)).j, ff.j) < 1e-8);
    for (const JFormula f : kForms) {
        const double a = stability_j(ModelParams{kDF, 0.3, -2.0}, with(f)).j;
        CHECK(rel_diff(a, stability_j(ModelParams{kDF, 0.3, -2.0}).j) < 1e-8);
    }
    CHECK(stability_j(ModelParams{kFD, 0.1, 0.5}).j > 0.0);
    CHECK(stability_j(ModelParams{kFF, 0.5548, 3.0}).j < 0.0);
    CHECK(stability_j(ModelParams{kFF, 0.5548, 0.0}).j > 0.0);
    CHECK(stability_j(ModelParams{kFF, 1.0, 1.7}).formula_used == JFormula::GaugeForm);
}

TEST_CASE("undefined on the non-existence curve") {
    const BoundaryPoint bp = gamma_no_point(0.5, kFF);
    CHECK_THROWS_AS(stability_j(ModelParams{kFF, bp.omega, bp.gamma}), NotExistsError);
    CHECK_THROWS_AS(stability_j(ModelParams{kFD, 1.0, 0.0}), NotExistsError);
}

TEST_CASE("blow-up toward the non-existence curve") {
    const BoundaryPoint bp = gamma_no_point(0.5, kFF);
    double below_prev = 0.0, above_prev = 0.0;
    for (double d : {1e-2, 1e-3, 1e-4}) {
        const double below = stability_j(ModelParams{kFF, bp.omega - d, bp.gamma - d}).j;
        const double above = stability_j(ModelParams{kFF, bp.omega + d, bp.gamma + d}).j;
        CHECK(below > below_prev);
        CHECK(above < above_prev);
        below_prev = below;
        above_prev = above;
        if (d == 1e-3) {
            CHECK(below > 1e2);
            CHECK(above < -1e2);
        }
    }
    CHECK(below_prev > 1e3);
    CHECK(above_prev < -1e3);
}

TEST_CASE("all-focusing sums are stable") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
        const ModelParams p = random_exists(kFF, rng, 0.01, 5.0, -10.0, -1e-3);
        CAPTURE(p.omega);
        CAPTURE(p.gamma);
        CHECK(stability_j(p).j > 0.0);
    }
}

TEST_CASE("sign is stable under tighter quadrature") {
    std::mt19937_64 rng(19);
    for (int k = 0; k < 100; ++k) {
        const ModelParams p = random_exists(kAllCases[k % 4], rng);
        const StabilityValue a = stability_j(p, with(JFormula::GaugeForm, 1e-6));
        if (!(std::abs(a.j) > 10.0 * a.est_error)) continue;
        const StabilityValue b = stability_j(p, with(JFormula::GaugeForm, 5e-7));
        CHECK(std::signbit(a.j) == std::signbit(b.j));
    }
}

TEST_CASE("error estimate and metadata") {
    const StabilityValue v = stability_j(ModelParams{kDF, 0.3, -2.0});
    CHECK(v.converged);
    CHECK(v.est_error <= 1e-10 * std::max(std::abs(v.j), 1e-2 * v.scale));
    CHECK(v.phi0 == doctest::Approx(require_phi0(ModelParams{kDF, 0.3, -2.0})));
    CHECK(v.interior_zeros == 1);
    CHECK(stability_j(ModelParams{kFF, 0.1, 2.6}).interior_zeros == 3);
}

TEST_CASE("non-convergence carries the partial value") {
    QuadOptions o;
    o.rel_tol = 1e-15;
    o.max_refinements = 1;
    const BoundaryPoint bp = gamma_no_point(0.5, kFF);
    try {
        stability_j(ModelParams{kFF, bp.omega - 1e-4, bp.gamma - 1e-4}, o);
        FAIL("expected QuadratureNonConvergent");
    } catch (const QuadratureNonConvergent& e) {
        CHECK_FALSE(e.partial().converged);
        CHECK(std::isfinite(e.partial().j));
        CHECK(e.partial().est_error > 0.0);
    }
}

TEST_CASE("mass derivative oracle") {
    const ModelParams points[] = {{kFF, 1.0, 1.7}, {kFF, 0.5, 0.0},  {kFF, 2.0, -1.0}, {kFD, 0.1, 0.5},
                                  {kFD, 1.0, -3.0}, {kDF, 1.0, -1.0}, {kDF, 0.3, -2.0}, {kDD, 0.5, -3.0},
                                  {kDD, 1.0, -4.0}, {kFF, 0.3, 1.0}};
    BvpOptions bo;
    bo.stencil = Stencil::Numerov;
    const double h = 1e-3;
    for (const ModelParams& p : points) {
        CAPTURE(p.signs.label());
        CAPTURE(p.omega);
        CAPTURE(p.gamma);
        auto n = [&](double w) { return mass(solve_profile(ModelParams{p.signs, w, p.gamma}.coeffs(), {}, bo)); };
        const double fd = (n(p.omega + h) - n(p.omega - h)) / (2 * h);
        CHECK(rel_diff(fd, stability_j(p).j) < 1e-3);
    }
}
