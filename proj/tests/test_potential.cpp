#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "tpnls/boundary.hpp"
#include "tpnls/errors.hpp"
#include "tpnls/potential.hpp"

using namespace tpnls;
using tpnls::test::kAllCases;
using tpnls::test::random_exists;

TEST_CASE("potential and its derivatives") {
    const GeneralCoeffs c = ModelParams{kFF, 0.1, 2.6}.coeffs();
    CHECK(potential(c, 0.0) == 0.0);
    CHECK(potential(c, 1.0) == doctest::Approx(0.05 - 1.0 / 3.0 + 2.6 / 4.0 - 0.2).epsilon(1e-15));

    const GeneralCoeffs quintic{0.4, 0.0, 0.0, 1.0};
    CHECK(std::abs(potential(quintic, 1.0)) < 1e-16);

    for (double x : {0.1, 0.7, 1.9, 3.2}) {
        const double h = 1e-5;
        const double dG = (potential(c, x + h) - potential(c, x - h)) / (2 * h);
        const double dg = (potential_deriv(c, x + h) - potential_deriv(c, x - h)) / (2 * h);
        CHECK(potential_deriv(c, x) == doctest::Approx(dG).epsilon(1e-8));
        CHECK(potential_deriv2(c, x) == doctest::Approx(dg).epsilon(1e-8));
    }
}

TEST_CASE("first positive zero") {
    const GeneralCoeffs quintic{0.4, 0.0, 0.0, 1.0};
    CHECK(*first_positive_zero(quintic) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*first_positive_zero(quintic, kDefaultRootTol, RootMethod::ClosedForm) == doctest::Approx(1.0).epsilon(1e-14));

    const auto phi0 = first_positive_zero(ModelParams{kFF, 0.1, 2.6}.coeffs());
    REQUIRE(phi0);
    CHECK(std::abs(*phi0 - 2.6585) < 5e-4);

    const auto tangent = first_positive_zero(ModelParams{kFF, 22.0 / 135.0, 1.8}.coeffs());
    REQUIRE(tangent);
    CHECK(std::abs(*tangent - 2.0 / 3.0) < 1e-9);

    // pure defocusing: G > 0 everywhere
    CHECK_FALSE(first_positive_zero(GeneralCoeffs{1.0, -1.0, 0.0, 0.0}));
    CHECK_FALSE(first_positive_zero(GeneralCoeffs{1.0, 0.0, 0.0, 0.0}));
}

TEST_CASE("closed-form and bracketing roots agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uw(0.01, 5.0), ug(-10.0, 10.0);
    int compared = 0;
    for (const CaseSigns s : kAllCases) {
        for (int k = 0; k < 500; ++k) {
            const GeneralCoeffs c = ModelParams{s, uw(rng), ug(rng)}.coeffs();
            const auto a = first_positive_zero(c, kDefaultRootTol, RootMethod::Bracketing);
            const auto b = first_positive_zero(c, kDefaultRootTol, RootMethod::ClosedForm);
            REQUIRE(a.has_value() == b.has_value());
            if (!a) continue;
            CHECK(std::abs(*a - *b) <= 1e-12 * std::max(1.0, *a));
            ++compared;
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("classification") {
    CHECK(exists(classify_existence(ModelParams{kDF, 1.0, -3.0})));

    const BoundaryPoint bp = gamma_no_point(0.5, kFF);
    const ExistenceClass on = classify_existence(ModelParams{kFF, bp.omega, bp.gamma});
    REQUIRE(std::holds_alternative<BoundaryDoubleZero>(on));
    CHECK(std::get<BoundaryDoubleZero>(on).t == doctest::Approx(0.5).epsilon(1e-8));

    CHECK(std::holds_alternative<NoPositiveZero>(classify_existence(ModelParams{kFD, 8.0 / 15.0, 0.0})));
    CHECK(class_name(classify_existence(ModelParams{kFD, 8.0 / 15.0, 0.0})) == "none");
    CHECK_THROWS_AS(require_phi0(ModelParams{kFD, 8.0 / 15.0, 0.0}), NotExistsError);
    CHECK_THROWS_AS(phi0_partials(ModelParams{kFF, bp.omega, bp.gamma}), NotExistsError);
}

TEST_CASE("Exists points are genuine first zeros") {
    std::mt19937_64 rng(3);
    for (const CaseSigns s : kAllCases) {
        for (int k = 0; k < 50; ++k) {
            const ModelParams p = random_exists(s, rng);
            const GeneralCoeffs c = p.coeffs();
            const auto ex = std::get<Exists>(classify_existence(p));
            const double scale = p.omega * ex.phi0 * ex.phi0;
            CHECK(std::abs(potential(c, ex.phi0)) <= 1e-12 * scale);
            CHECK(ex.g_at_phi0 < 0.0);
            bool positive = true;
            for (int i = 1; i < 1000; ++i) positive = positive && potential(c, ex.phi0 * i / 1000.0) > 0.0;
            CHECK(positive);
        }
    }
}

TEST_CASE("phi0 is increasing in omega and gamma") {
    std::mt19937_64 rng(5);
    const double h = 1e-4;
    for (const CaseSigns s : kAllCases) {
        for (int k = 0; k < 100; ++k) {
            const ModelParams p = random_exists(s, rng);
            const double phi0 = require_phi0(p);
            CHECK(require_phi0(ModelParams{s, p.omega + h, p.gamma}) > phi0);
            CHECK(require_phi0(ModelParams{s, p.omega, p.gamma + h}) > phi0);
        }
    }
}

TEST_CASE("phi0 partials match central differences") {
    std::mt19937_64 rng(7);
    auto check = [](const ModelParams& p) {
        const Phi0Partials d = phi0_partials(p);
        CHECK(d.d_omega > 0.0);
        CHECK(d.d_gamma > 0.0);
        const double hw = 1e-6 * p.omega;
        const double hg = 1e-6 * std::max(1.0, std::abs(p.gamma));
        const double fw = (require_phi0(ModelParams{p.signs, p.omega + hw, p.gamma}) -
                           require_phi0(ModelParams{p.signs, p.omega - hw, p.gamma})) / (2 * hw);
        const double fg = (require_phi0(ModelParams{p.signs, p.omega, p.gamma + hg}) -
                           require_phi0(ModelParams{p.signs, p.omega, p.gamma - hg})) / (2 * hg);
        CHECK(d.d_omega == doctest::Approx(fw).epsilon(1e-4));
        CHECK(d.d_gamma == doctest::Approx(fg).epsilon(1e-4));
    };
    check(ModelParams{kFF, 0.1, 2.6});
    for (const CaseSigns s : kAllCases)
        for (int k = 0; k < 25; ++k) check(random_exists(s, rng));

    // pure quintic with omega = 2/5: g(1) = -0.6, so d phi0 / d omega = 1 / 1.2
    const GeneralCoeffs quintic{0.4, 0.0, 0.0, 1.0};
    const double g0 = potential_deriv(quintic, 1.0);
    CHECK(g0 == doctest::Approx(-0.6));
    CHECK(1.0 / (-2.0 * g0) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("interior zeros of g") {
    const InteriorZeros z = interior_zero_count(ModelParams{kFF, 0.1, 2.6});
    REQUIRE(z.count == 3);
    CHECK(std::abs(z.zeros[0] - 0.1711) < 5e-4);
    CHECK(std::abs(z.zeros[1] - 0.2708) < 5e-4);
    CHECK(std::abs(z.zeros[2] - 2.1581) < 5e-4);

    const InteriorZeros one = interior_zero_count(ModelParams{kFF, 0.132, 1.9});
    REQUIRE(one.count == 1);
    CHECK(one.zeros[0] == doctest::Approx(0.2));
}

TEST_CASE("a single interior zero outside F*F with gamma > sqrt3") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> pick(0, 3);
    int checked = 0;
    while (checked < 1000) {
        const CaseSigns s = kAllCases[pick(rng)];
        const ModelParams p = random_exists(s, rng);
        if (s == kFF && p.gamma > std::sqrt(3.0)) continue;
        CHECK(interior_zero_count(p).count == 1);
        ++checked;
    }
}

TEST_CASE("case names") {
    CHECK(kFD.label() == "F*D");
    CHECK(kDD.short_name() == "dd");
    CHECK(*parse_case("F*D") == kFD);
    CHECK(*parse_case("df") == kDF);
    CHECK_FALSE(parse_case("fx"));
}
