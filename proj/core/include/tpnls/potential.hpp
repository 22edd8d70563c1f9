#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tpnls {

/// Signs (a1, a3) of the quadratic and quartic terms of the nonlinearity
/// f(u) = a1|u|u - gamma|u|^2 u + a3|u|^3 u.
struct CaseSigns {
    int a1 = 1;
    int a3 = 1;

    friend bool operator==(CaseSigns, CaseSigns) = default;

    /// "F*F", "F*D", "D*F" or "D*D".
    std::string label() const;
    /// "ff", "fd", "df" or "dd".
    std::string short_name() const;
};

inline constexpr CaseSigns kFF{1, 1};
inline constexpr CaseSigns kFD{1, -1};
inline constexpr CaseSigns kDF{-1, 1};
inline constexpr CaseSigns kDD{-1, -1};

/// Accepts ff/fd/df/dd (case-insensitive, '*' allowed in the middle, e.g. "F*D").
std::optional<CaseSigns> parse_case(std::string_view name);

/// Quartic force g(x) = omega x - c2 x^2 - c3 x^3 - c4 x^4 on x >= 0.
/// The triple-power family embeds as c2 = a1, c3 = -gamma, c4 = a3.
struct GeneralCoeffs {
    double omega = 1.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
};

struct ModelParams {
    CaseSigns signs = kFF;
    double omega = 1.0;
    double gamma = 0.0;

    GeneralCoeffs coeffs() const { return {omega, double(signs.a1), -gamma, double(signs.a3)}; }
};

/// G(x) = omega/2 x^2 - c2/3 x^3 - c3/4 x^4 - c4/5 x^5.
double potential(const GeneralCoeffs& c, double x);
/// g(x) = G'(x).
double potential_deriv(const GeneralCoeffs& c, double x);
/// g'(x) = G''(x).
double potential_deriv2(const GeneralCoeffs& c, double x);

/// Real cubic a[0] + a[1] x + a[2] x^2 + a[3] x^3 (leading terms may vanish).
struct Cubic {
    std::array<double, 4> a{};

    double operator()(double x) const { return a[0] + x * (a[1] + x * (a[2] + x * a[3])); }
    double deriv(double x) const { return a[1] + x * (2.0 * a[2] + x * 3.0 * a[3]); }
    /// Sum of term magnitudes at x; the rounding scale of operator().
    double magnitude(double x) const;
    int degree() const;
};

/// 2G(x)/x^2, whose positive zeros are the positive zeros of G.
Cubic reduced_potential(const GeneralCoeffs& c);
/// g(x)/x, whose positive zeros are the positive zeros of g.
Cubic reduced_force(const GeneralCoeffs& c);

/// Zeros of p in (lo, hi), ascending. p is split into monotone pieces at the
/// zeros of p'; a piece contributes a zero on a strict sign change (refined by
/// safeguarded Newton) and a critical point contributes a zero when
/// |p| <= tol * p.magnitude there (tangency). Clustered zeros collapse to one.
std::vector<double> cubic_zeros_bracketing(const Cubic& p, double lo, double hi, double tol);

/// Real zeros of p from the closed-form (trigonometric / Cardano) solution,
/// each polished by Newton steps. Ascending; repeated zeros appear once.
std::vector<double> cubic_zeros_closed_form(const Cubic& p);

/// Upper bound on the magnitude of every real zero of p (Cauchy bound).
double cubic_root_bound(const Cubic& p);

enum class RootMethod { Bracketing, ClosedForm };

inline constexpr double kDefaultRootTol = 1e-12;

/// Smallest x > 0 with G(x) = 0, counting tangential (double) zeros; nullopt
/// when G > 0 on (0, inf).
std::optional<double> first_positive_zero(const GeneralCoeffs& c, double tol = kDefaultRootTol,
                                          RootMethod method = RootMethod::Bracketing);

struct Exists {
    double phi0;
    double g_at_phi0;
};
struct BoundaryDoubleZero {
    double t;
};
struct NoPositiveZero {};

using ExistenceClass = std::variant<Exists, BoundaryDoubleZero, NoPositiveZero>;

/// |g(phi0)| at or below this (times 1 + omega*phi0) counts as a double zero.
inline constexpr double kDoubleZeroTol = 1e-9;

ExistenceClass classify_existence(const GeneralCoeffs& c, double tol = kDefaultRootTol);
ExistenceClass classify_existence(const ModelParams& p, double tol = kDefaultRootTol);

inline bool exists(const ExistenceClass& e) { return std::holds_alternative<Exists>(e); }
std::string_view class_name(const ExistenceClass& e);

/// Returns phi0 or throws NotExistsError.
double require_phi0(const ModelParams& p);
double require_phi0(const GeneralCoeffs& c);

struct Phi0Partials {
    double d_omega;
    double d_gamma;
};

/// Implicit-function derivatives of phi0 in omega and gamma; both positive.
Phi0Partials phi0_partials(const ModelParams& p);

struct InteriorZeros {
    int count = 0;
    std::vector<double> zeros;
};

/// Zeros of g in (0, phi0): fixed points inside the homoclinic orbit.
InteriorZeros interior_zero_count(const GeneralCoeffs& c);
InteriorZeros interior_zero_count(const ModelParams& p);

}  // namespace tpnls
