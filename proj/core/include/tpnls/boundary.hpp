#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpnls/potential.hpp"

namespace tpnls {

/// A point of the non-existence curve: G has the double zero t and
/// G(x) = -(a3/5) x^2 (x - t)^2 (x - x0).
struct BoundaryPoint {
    double t;
    double omega;
    double gamma;
    double x0;
};

enum class CurveKind { GammaNo, GammaCr, LevelSet };

struct CurvePoint {
    double omega;
    double gamma;
};

/// Ordered polyline in the (omega, gamma) half-plane. `param` holds the
/// underlying parameter per point (t for the non-existence curve, empty
/// otherwise).
struct ParamCurve {
    CurveKind kind = CurveKind::LevelSet;
    double level = 0.0;
    std::vector<CurvePoint> points;
    std::vector<double> param;
    bool closed = false;

    std::string label() const;
};

/// Admissible double-zero locations: F*F (0, sqrt5/3], F*D (0, inf),
/// D*D (sqrt(5/3), inf); D*F has none.
struct TInterval {
    double lo;
    double hi;
    bool hi_closed;
    bool contains(double t) const { return t > lo && (hi_closed ? t <= hi : t < hi); }
};
std::optional<TInterval> admissible_t(CaseSigns s);

BoundaryPoint gamma_no_point(double t, CaseSigns s);

/// n points with t evenly spaced over [t_lo, t_hi].
ParamCurve gamma_no_curve(CaseSigns s, double t_lo, double t_hi, int n);

/// Endpoint of the F*F non-existence curve, where the double zero is triple:
/// (2 sqrt5/27, 4/sqrt5) at t = sqrt5/3.
BoundaryPoint ff_endpoint();

/// Limit of the D*D curve as t -> sqrt(5/3)+: (0, -8 sqrt15/15).
CurvePoint dd_asymptote();

struct Phi0Limits {
    double from_below;
    std::optional<double> from_above;
};

/// Limits of phi0 when (omega, gamma) approaches the curve point at t from
/// below-left (-> t) and, in F*F only, from above-right (-> x0 >= t).
Phi0Limits phi0_limits_across(double t, CaseSigns s);

}  // namespace tpnls
