#include "tpnls/boundary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tpnls/errors.hpp"

namespace tpnls {

std::string ParamCurve::label() const {
    switch (kind) {
        case CurveKind::GammaNo: return "gamma_no";
        case CurveKind::GammaCr: return "gamma_cr";
        case CurveKind::LevelSet: break;
    }
    std::ostringstream os;
    os.precision(17);
    os << "level:" << level;
    return os.str();
}

std::optional<TInterval> admissible_t(CaseSigns s) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (s == kFF) return TInterval{0.0, std::sqrt(5.0) / 3.0, true};
    if (s == kFD) return TInterval{0.0, inf, false};
    if (s == kDD) return TInterval{std::sqrt(5.0 / 3.0), inf, false};
    return std::nullopt;
}

BoundaryPoint gamma_no_point(double t, CaseSigns s) {
    const auto range = admissible_t(s);
    if (!range) throw DomainError("the " + s.label() + " case has no non-existence curve");
    if (!range->contains(t)) throw DomainError("t outside the admissible interval for " + s.label());
    const double a1 = s.a1;
    const double a3 = s.a3;
    BoundaryPoint bp;
    bp.t = t;
    bp.omega = a1 * t / 3.0 - a3 * t * t * t / 5.0;
    bp.gamma = a1 * 2.0 / (3.0 * t) + a3 * 6.0 * t / 5.0;
    bp.x0 = 5.0 * a1 / (6.0 * a3 * t) - 0.5 * t;
    return bp;
}

ParamCurve gamma_no_curve(CaseSigns s, double t_lo, double t_hi, int n) {
    if (n < 2) throw DomainError("gamma_no_curve needs n >= 2");
    if (!(t_lo < t_hi)) throw DomainError("gamma_no_curve needs t_lo < t_hi");
    ParamCurve curve;
    curve.kind = CurveKind::GammaNo;
    curve.points.reserve(std::size_t(n));
    curve.param.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        const double t = i + 1 == n ? t_hi : t_lo + i * (t_hi - t_lo) / (n - 1);
        const BoundaryPoint bp = gamma_no_point(t, s);
        curve.points.push_back({bp.omega, bp.gamma});
        curve.param.push_back(t);
    }
    return curve;
}

BoundaryPoint ff_endpoint() {
    const double t = std::sqrt(5.0) / 3.0;
    return {t, 2.0 * std::sqrt(5.0) / 27.0, 4.0 / std::sqrt(5.0), t};
}

CurvePoint dd_asymptote() { return {0.0, -8.0 * std::sqrt(15.0) / 15.0}; }

Phi0Limits phi0_limits_across(double t, CaseSigns s) {
    const BoundaryPoint bp = gamma_no_point(t, s);
    Phi0Limits lim{t, std::nullopt};
    if (s == kFF) lim.from_above = bp.x0;
    return lim;
}

}  // namespace tpnls
