#pragma once

#include <cmath>

#include "tpnls/potential.hpp"

namespace tpnls::detail {

// G(x) = (phi0 - x) x^2 p(x) and g(x) - g(phi0) = (x - phi0) D(x), both
// evaluated without cancellation near x = phi0.
struct Factored {
    GeneralCoeffs c;
    double phi0;
    double g0;
    double b0, b1, b2;  // 2G/x^2 = (x - phi0)(b0 + b1 x + b2 x^2)

    Factored(const GeneralCoeffs& cc, double r) : c(cc), phi0(r), g0(potential_deriv(cc, r)) {
        const Cubic h = reduced_potential(c);
        b2 = h.a[3];
        b1 = h.a[2] + r * b2;
        b0 = h.a[1] + r * b1;
    }

    double p(double x) const { return -0.5 * (b0 + x * (b1 + x * b2)); }

    double divided_g(double x) const {
        const double r = phi0;
        return c.omega - c.c2 * (x + r) - c.c3 * (x * x + x * r + r * r) -
               c.c4 * (x * x * x + x * x * r + x * r * r + r * r * r);
    }

    // (q(phi0) - q(x)) / (phi0 - x) for q(x) = g(x)/x.
    double divided_q(double x) const {
        const double r = phi0;
        return -c.c2 - c.c3 * (x + r) - c.c4 * (x * x + x * r + r * r);
    }

    // sqrt(2 G(x)) for 0 <= x <= phi0.
    double sqrt_2g(double x) const;
};

inline double Factored::sqrt_2g(double x) const {
    const double d = phi0 - x;
    const double pp = p(x);
    return d > 0.0 && pp > 0.0 ? x * std::sqrt(2.0 * d * pp) : 0.0;
}

}  // namespace tpnls::detail
