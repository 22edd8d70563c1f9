#include <cmath>

#include "doctest.h"
#include "tpnls/boundary.hpp"
#include "tpnls/errors.hpp"

using namespace tpnls;

TEST_CASE("endpoint constants") {
    const BoundaryPoint e = gamma_no_point(std::sqrt(5.0) / 3.0, kFF);
    CHECK(e.omega == doctest::Approx(2.0 * std::sqrt(5.0) / 27.0).epsilon(1e-14));
    CHECK(e.gamma == doctest::Approx(4.0 * std::sqrt(5.0) / 5.0).epsilon(1e-14));
    CHECK(e.x0 == doctest::Approx(e.t).epsilon(1e-14));
    CHECK(ff_endpoint().omega == doctest::Approx(0.165635).epsilon(1e-6));
    CHECK(ff_endpoint().gamma == doctest::Approx(1.788854).epsilon(1e-6));

    const double ts = std::sqrt(5.0 / 3.0);
    const BoundaryPoint near = gamma_no_point(ts * (1 + 1e-12), kDD);
    CHECK(std::abs(near.omega) < 1e-11);
    CHECK(near.gamma == doctest::Approx(dd_asymptote().gamma).epsilon(1e-11));
    CHECK(dd_asymptote().gamma == doctest::Approx(-2.065591).epsilon(1e-6));

    const BoundaryPoint fd = gamma_no_point(1.0, kFD);
    CHECK(fd.omega == doctest::Approx(8.0 / 15.0));
    CHECK(fd.gamma == doctest::Approx(-8.0 / 15.0));
    CHECK(fd.x0 == doctest::Approx(-4.0 / 3.0));
}

TEST_CASE("admissible intervals") {
    CHECK_THROWS_AS(gamma_no_point(1.0, kDF), DomainError);
    CHECK_THROWS_AS(gamma_no_curve(kDF, 0.1, 1.0, 10), DomainError);
    CHECK_THROWS_AS(gamma_no_point(0.8, kFF), DomainError);
    CHECK_THROWS_AS(gamma_no_point(1.0, kDD), DomainError);
    CHECK_THROWS_AS(gamma_no_point(0.0, kFD), DomainError);
    CHECK_NOTHROW(gamma_no_point(std::sqrt(5.0) / 3.0, kFF));
}

TEST_CASE("factorization reproduces the potential") {
    const CaseSigns cases[] = {kFF, kFD, kDD};
    const double ts[][3] = {{0.1, 0.5, 0.74}, {0.2, 1.0, 3.0}, {1.3, 2.0, 4.0}};
    for (int k = 0; k < 3; ++k) {
        for (double t : ts[k]) {
            const BoundaryPoint bp = gamma_no_point(t, cases[k]);
            const GeneralCoeffs c = ModelParams{cases[k], bp.omega, bp.gamma}.coeffs();
            const double xmax = 2.0 * std::max(t, bp.x0);
            double worst = 0.0, scale = 0.0;
            for (int i = 0; i <= 400; ++i) {
                const double x = xmax * i / 400.0;
                const double f = -(cases[k].a3 / 5.0) * x * x * (x - t) * (x - t) * (x - bp.x0);
                worst = std::max(worst, std::abs(potential(c, x) - f));
                scale = std::max(scale, std::abs(f));
            }
            CHECK(worst <= 1e-10 * scale);
            CHECK(bp.omega > 0.0);
        }
    }
}

TEST_CASE("curve points classify as double zeros") {
    for (const CaseSigns s : {kFF, kFD, kDD}) {
        const TInterval iv = *admissible_t(s);
        const double lo = s == kDD ? iv.lo * 1.01 : 0.05;
        const double hi = std::isinf(iv.hi) ? lo + 3.0 : iv.hi;
        const ParamCurve curve = gamma_no_curve(s, lo, hi, 40);
        REQUIRE(curve.points.size() == 40);
        CHECK(curve.label() == "gamma_no");
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const ExistenceClass cls = classify_existence(ModelParams{s, curve.points[i].omega, curve.points[i].gamma});
            REQUIRE(std::holds_alternative<BoundaryDoubleZero>(cls));
            CHECK(std::abs(std::get<BoundaryDoubleZero>(cls).t - curve.param[i]) <= 1e-8);
        }
    }
}

TEST_CASE("curve orientation and slope") {
    const ParamCurve ff = gamma_no_curve(kFF, 0.01, std::sqrt(5.0) / 3.0, 100);
    for (std::size_t i = 1; i < ff.points.size(); ++i) {
        CHECK(std::isfinite(ff.points[i].gamma));
        CHECK(ff.points[i].omega > ff.points[i - 1].omega);
        CHECK(ff.points[i].gamma < ff.points[i - 1].gamma);
        CHECK(ff.param[i] > ff.param[i - 1]);
    }
    for (const CaseSigns s : {kFF, kFD, kDD}) {
        for (double t : s == kDD ? std::vector<double>{1.5, 2.5} : std::vector<double>{0.3, 0.6}) {
            const double h = 1e-6;
            const BoundaryPoint a = gamma_no_point(t - h, s), b = gamma_no_point(t + h, s);
            const double slope = (b.gamma - a.gamma) / (b.omega - a.omega);
            CHECK(slope < 0.0);
            CHECK(slope == doctest::Approx(-2.0 / (t * t)).epsilon(1e-3));
        }
    }
    const ParamCurve dd = gamma_no_curve(kDD, 1.3, 3.0, 50);
    for (const auto& pt : dd.points) CHECK(pt.gamma < -2.0655);
}

TEST_CASE("phi0 limits across the curve") {
    const Phi0Limits a = phi0_limits_across(0.7, kFF);
    CHECK(a.from_below == 0.7);
    REQUIRE(a.from_above);
    CHECK(*a.from_above == doctest::Approx(0.8405).epsilon(1e-4));

    const double te = std::sqrt(5.0) / 3.0;
    const Phi0Limits e = phi0_limits_across(te, kFF);
    CHECK(*e.from_above == doctest::Approx(te).epsilon(1e-14));
    CHECK_FALSE(phi0_limits_across(1.0, kFD).from_above);
    CHECK_FALSE(phi0_limits_across(2.0, kDD).from_above);

    for (double t : {0.1, 0.3, 0.5, 0.7}) CHECK(*phi0_limits_across(t, kFF).from_above > t);
}

TEST_CASE("phi0 jumps across the F*F curve") {
    const double t = 0.5;
    const BoundaryPoint bp = gamma_no_point(t, kFF);
    double prev_below = 0.0, prev_above = 1e9;
    for (double d : {1e-2, 1e-3, 1e-4}) {
        const double below = require_phi0(ModelParams{kFF, bp.omega - d, bp.gamma - d});
        const double above = require_phi0(ModelParams{kFF, bp.omega + d, bp.gamma + d});
        CHECK(below < t);
        CHECK(above > bp.x0);
        CHECK(below > prev_below);
        CHECK(above < prev_above);
        prev_below = below;
        prev_above = above;
    }
    CHECK(std::abs(prev_below - t) < 0.02);
    CHECK(std::abs(prev_above - bp.x0) < 0.02);
}
