#include "tpnls/potential.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "tpnls/errors.hpp"

namespace tpnls {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Root of p in [a, b] given a strict sign change; Newton steps that leave the
// bracket or stall fall back to bisection.
double safeguarded_newton(const Cubic& p, double a, double b) {
    double fa = p(a);
    if (fa > 0.0) std::swap(a, b);  // keep p(a) < 0 < p(b)
    double x = 0.5 * (a + b);
    double dx_old = std::abs(b - a);
    double dx = dx_old;
    for (int it = 0; it < 200; ++it) {
        const double f = p(x);
        const double df = p.deriv(x);
        if (f == 0.0) return x;
        if (f < 0.0) a = x; else b = x;
        const bool newton_ok = df != 0.0 && ((x - f / df) - a) * ((x - f / df) - b) < 0.0 &&
                               std::abs(2.0 * f) < std::abs(dx_old * df);
        dx_old = dx;
        if (newton_ok) {
            dx = f / df;
            x -= dx;
        } else {
            dx = 0.5 * (b - a);
            x = a + dx;
        }
        if (std::abs(b - a) <= 4.0 * kEps * std::max(std::abs(x), kEps) || std::abs(dx) <= kEps * std::abs(x))
            return x;
    }
    return x;
}

// Real roots of c0 + c1 x + c2 x^2, ascending.
std::vector<double> quadratic_roots(double c0, double c1, double c2) {
    std::vector<double> out;
    if (c2 == 0.0) {
        if (c1 != 0.0) out.push_back(-c0 / c1);
        return out;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) {
        // Tangent extremum: keep the vertex when the discriminant is rounding-level.
        if (-disc <= 64.0 * kEps * (c1 * c1 + std::abs(4.0 * c2 * c0))) out.push_back(-c1 / (2.0 * c2));
        return out;
    }
    if (disc == 0.0) {
        out.push_back(-c1 / (2.0 * c2));
        return out;
    }
    const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    double r1 = q / c2;
    double r2 = q != 0.0 ? c0 / q : -r1;
    if (r1 > r2) std::swap(r1, r2);
    out.push_back(r1);
    out.push_back(r2);
    return out;
}

double polish(const Cubic& p, double x) {
    for (int k = 0; k < 4; ++k) {
        const double d = p.deriv(x);
        if (d == 0.0) break;
        const double step = p(x) / d;
        if (!std::isfinite(step)) break;
        x -= step;
        if (std::abs(step) <= kEps * std::abs(x)) break;
    }
    return x;
}

// Critical points of p strictly inside (lo, hi).
std::vector<double> critical_points(const Cubic& p, double lo, double hi) {
    auto crit = quadratic_roots(p.a[1], 2.0 * p.a[2], 3.0 * p.a[3]);
    std::vector<double> out;
    for (double x : crit)
        if (x > lo && x < hi) out.push_back(x);
    return out;
}

bool in_dead_zone(const Cubic& p, double x, double tol) {
    return std::abs(p(x)) <= tol * p.magnitude(x);
}

}  // namespace

std::string CaseSigns::label() const {
    std::string s = a1 > 0 ? "F" : "D";
    s += "*";
    s += a3 > 0 ? "F" : "D";
    return s;
}

std::string CaseSigns::short_name() const {
    std::string s = a1 > 0 ? "f" : "d";
    s += a3 > 0 ? "f" : "d";
    return s;
}

std::optional<CaseSigns> parse_case(std::string_view name) {
    std::string s;
    for (char ch : name)
        if (ch != '*') s += char(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "ff") return kFF;
    if (s == "fd") return kFD;
    if (s == "df") return kDF;
    if (s == "dd") return kDD;
    return std::nullopt;
}

double potential(const GeneralCoeffs& c, double x) {
    const double x2 = x * x;
    return x2 * (0.5 * c.omega - x * (c.c2 / 3.0 + x * (0.25 * c.c3 + x * 0.2 * c.c4)));
}

double potential_deriv(const GeneralCoeffs& c, double x) {
    return x * (c.omega - x * (c.c2 + x * (c.c3 + x * c.c4)));
}

double potential_deriv2(const GeneralCoeffs& c, double x) {
    return c.omega - x * (2.0 * c.c2 + x * (3.0 * c.c3 + x * 4.0 * c.c4));
}

double Cubic::magnitude(double x) const {
    const double ax = std::abs(x);
    return std::abs(a[0]) + ax * (std::abs(a[1]) + ax * (std::abs(a[2]) + ax * std::abs(a[3])));
}

int Cubic::degree() const {
    for (int d = 3; d > 0; --d)
        if (a[d] != 0.0) return d;
    return 0;
}

Cubic reduced_potential(const GeneralCoeffs& c) {
    return Cubic{{c.omega, -2.0 * c.c2 / 3.0, -0.5 * c.c3, -0.4 * c.c4}};
}

Cubic reduced_force(const GeneralCoeffs& c) {
    return Cubic{{c.omega, -c.c2, -c.c3, -c.c4}};
}

double cubic_root_bound(const Cubic& p) {
    const int d = p.degree();
    if (d == 0) return 0.0;
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(p.a[i] / p.a[d]));
    return 1.0 + m;
}

std::vector<double> cubic_zeros_bracketing(const Cubic& p, double lo, double hi, double tol) {
    std::vector<double> zeros;
    if (!(hi > lo) || p.degree() == 0) return zeros;

    std::vector<double> nodes{lo};
    for (double x : critical_points(p, lo, hi)) nodes.push_back(x);
    nodes.push_back(hi);

    // Interior nodes are critical points; a dead-zone value there is a tangency.
    const std::size_t last = nodes.size() - 1;
    auto dead = [&](std::size_t i) { return in_dead_zone(p, nodes[i], tol); };

    for (std::size_t i = 0; i < last; ++i) {
        const double a = nodes[i];
        const double b = nodes[i + 1];
        const bool right_is_critical = i + 1 < last;
        if (right_is_critical && dead(i + 1)) {
            zeros.push_back(b);
            continue;
        }
        if (i > 0 && dead(i)) continue;  // piece starts on a reported tangency
        const double fa = p(a);
        const double fb = p(b);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) zeros.push_back(safeguarded_newton(p, a, b));
    }
    return zeros;
}

std::vector<double> cubic_zeros_closed_form(const Cubic& p) {
    std::vector<double> roots;
    const int d = p.degree();
    if (d == 0) return roots;
    if (d < 3) {
        roots = quadratic_roots(p.a[0], p.a[1], d == 2 ? p.a[2] : 0.0);
    } else {
        const double B = p.a[2] / p.a[3];
        const double C = p.a[1] / p.a[3];
        const double D = p.a[0] / p.a[3];
        const double Q = (B * B - 3.0 * C) / 9.0;
        const double R = (2.0 * B * B * B - 9.0 * B * C + 27.0 * D) / 54.0;
        const double Q3 = Q * Q * Q;
        const double shift = B / 3.0;
        if (R * R < Q3) {
            const double theta = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
            const double m = -2.0 * std::sqrt(Q);
            for (int k = 0; k < 3; ++k)
                roots.push_back(m * std::cos((theta + 2.0 * std::numbers::pi * k) / 3.0) - shift);
        } else {
            const double A = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q3)), R);
            const double Bq = A != 0.0 ? Q / A : 0.0;
            roots.push_back(A + Bq - shift);
            if (std::abs(R * R - Q3) <= 1e3 * kEps * std::max(R * R, std::abs(Q3)))
                roots.push_back(-0.5 * (A + Bq) - shift);
        }
    }
    for (double& r : roots) r = polish(p, r);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) <= 8.0 * kEps * std::max(std::abs(x), 1.0); }),
                roots.end());
    return roots;
}

std::optional<double> first_positive_zero(const GeneralCoeffs& c, double tol, RootMethod method) {
    const Cubic h = reduced_potential(c);
    const double bound = cubic_root_bound(h);
    if (bound == 0.0) return std::nullopt;
    const double hi = 2.0 * bound;

    if (method == RootMethod::Bracketing) {
        const auto zeros = cubic_zeros_bracketing(h, 0.0, hi, tol);
        if (zeros.empty()) return std::nullopt;
        return zeros.front();
    }

    std::vector<double> candidates;
    std::vector<double> tangent;
    for (double xc : critical_points(h, 0.0, hi))
        if (in_dead_zone(h, xc, tol)) tangent.push_back(xc);
    for (double r : cubic_zeros_closed_form(h)) {
        if (!(r > 0.0)) continue;
        const bool near_tangent = std::any_of(tangent.begin(), tangent.end(), [&](double xc) {
            return std::abs(r - xc) <= 10.0 * std::sqrt(tol) * (1.0 + xc);
        });
        if (!near_tangent) candidates.push_back(r);
    }
    candidates.insert(candidates.end(), tangent.begin(), tangent.end());
    if (candidates.empty()) return std::nullopt;
    return *std::min_element(candidates.begin(), candidates.end());
}

ExistenceClass classify_existence(const GeneralCoeffs& c, double tol) {
    const auto phi0 = first_positive_zero(c, tol);
    if (!phi0) return NoPositiveZero{};
    const double g0 = potential_deriv(c, *phi0);
    const double threshold = kDoubleZeroTol * (1.0 + c.omega * *phi0);
    if (g0 < -threshold) return Exists{*phi0, g0};
    return BoundaryDoubleZero{*phi0};
}

ExistenceClass classify_existence(const ModelParams& p, double tol) {
    return classify_existence(p.coeffs(), tol);
}

std::string_view class_name(const ExistenceClass& e) {
    if (std::holds_alternative<Exists>(e)) return "exists";
    if (std::holds_alternative<BoundaryDoubleZero>(e)) return "boundary";
    return "none";
}

double require_phi0(const GeneralCoeffs& c) {
    const auto cls = classify_existence(c);
    if (const auto* ex = std::get_if<Exists>(&cls)) return ex->phi0;
    throw NotExistsError("no standing wave: first positive zero of G is " +
                         std::string(std::holds_alternative<NoPositiveZero>(cls) ? "missing" : "a double zero"));
}

double require_phi0(const ModelParams& p) { return require_phi0(p.coeffs()); }

Phi0Partials phi0_partials(const ModelParams& p) {
    const GeneralCoeffs c = p.coeffs();
    const double phi0 = require_phi0(c);
    const double g0 = potential_deriv(c, phi0);
    const double p2 = phi0 * phi0;
    return {p2 / (-2.0 * g0), p2 * p2 / (-4.0 * g0)};
}

InteriorZeros interior_zero_count(const GeneralCoeffs& c) {
    const double phi0 = require_phi0(c);
    InteriorZeros out;
    out.zeros = cubic_zeros_bracketing(reduced_force(c), 0.0, phi0, kDefaultRootTol);
    out.count = int(out.zeros.size());
    return out;
}

InteriorZeros interior_zero_count(const ModelParams& p) { return interior_zero_count(p.coeffs()); }

}  // namespace tpnls
