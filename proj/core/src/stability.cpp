#include "tpnls/stability.hpp"

#include <cmath>
#include <sstream>

#include "factored.hpp"
#include "tpnls/quadrature.hpp"

namespace tpnls {

namespace {

using detail::Factored;

template <class F>
StabilityValue finish(const Factored& f, JFormula formula, double prefactor, F&& integrand,
                      const QuadOptions& opts, double hi = 1.0) {
    const QuadResult q = integrate_adaptive(integrand, 0.0, hi, opts.rel_tol, opts.max_refinements);
    StabilityValue v;
    v.j = prefactor * q.value;
    v.formula_used = formula;
    v.est_error = std::abs(prefactor) * q.abs_error;
    v.scale = std::abs(prefactor) * q.l1;
    v.phi0 = f.phi0;
    v.converged = q.converged && std::isfinite(v.j);
    if (!v.converged) throw QuadratureNonConvergent(v);
    return v;
}

std::string describe(const StabilityValue& v) {
    std::ostringstream os;
    os.precision(6);
    os << "quadrature for J did not converge (partial J = " << v.j << ", error estimate " << v.est_error << ")";
    return os.str();
}

}  // namespace

QuadratureNonConvergent::QuadratureNonConvergent(const StabilityValue& partial)
    : NonConvergenceError(describe(partial)), partial_(partial) {}

std::string_view formula_name(JFormula f) {
    switch (f) {
        case JFormula::UnitInterval: return "unit_interval";
        case JFormula::XForm: return "x_form";
        case JFormula::GaugeForm: return "gauge_form";
        case JFormula::GaugeFormAlt: return "gauge_form_alt";
    }
    return "unknown";
}

StabilityValue j_unit_interval(const GeneralCoeffs& c, const QuadOptions& opts) {
    const Factored f(c, require_phi0(c));
    const double r = f.phi0;
    const double a = r * r;
    const double uprime_a = f.g0 / r;
    const double prefactor = -a * std::sqrt(a) / (2.0 * uprime_a);
    // H(s) = F(s) * 2 sqrt(1 - s), F the integrand in s; U(as) = 2 a s (phi0 - x) p(x), x = phi0 sqrt(s).
    auto h = [&](double s, double rs) {
        const double x = r * rs;
        const double px = f.p(x);
        return (3.0 + f.divided_q(x) / (2.0 * px)) * 2.0 / std::sqrt(2.0 * a * r * px / (1.0 + rs));
    };
    // [0, 1]: s = 1 - u^2 with u = w / sqrt2, covering s in [1/2, 1].
    // [1, 2]: s = v^2 with v = (2 - w) / sqrt2, covering s in [0, 1/2].
    const double k = std::sqrt(0.5);
    auto integrand = [&](double w) {
        if (w <= 1.0) {
            const double u = w * k;
            const double s = 1.0 - u * u;
            return k * h(s, std::sqrt(s));
        }
        const double v = (2.0 - w) * k;
        return k * h(v * v, v) * v / std::sqrt(1.0 - v * v);
    };
    return finish(f, JFormula::UnitInterval, prefactor, integrand, opts, 2.0);
}

StabilityValue j_x_form(const GeneralCoeffs& c, const QuadOptions& opts) {
    const Factored f(c, require_phi0(c));
    const double r = f.phi0;
    const double sr = std::sqrt(r);
    const double prefactor = -std::sqrt(2.0) / (4.0 * f.g0);
    auto integrand = [&](double u) {
        const double x = r * (1.0 - u * u);
        const double px = f.p(x);
        const double sp = std::sqrt(px);
        return 2.0 * sr * (6.0 * r * x / sp + (r * f.divided_g(x) - f.g0) / (px * sp));
    };
    return finish(f, JFormula::XForm, prefactor, integrand, opts);
}

StabilityValue j_gauge_form(const GeneralCoeffs& c, const QuadOptions& opts) {
    const Factored f(c, require_phi0(c));
    const double r = f.phi0;
    const double sr = std::sqrt(r);
    const double prefactor = -std::sqrt(2.0) / (4.0 * f.g0);
    auto integrand = [&](double u) {
        const double x = r * (1.0 - u * u);
        const double px = f.p(x);
        return 2.0 * sr * x * (8.0 * x * px + f.divided_g(x)) / (px * std::sqrt(px));
    };
    return finish(f, JFormula::GaugeForm, prefactor, integrand, opts);
}

StabilityValue j_gauge_form_alt(const GeneralCoeffs& c, const QuadOptions& opts) {
    const Factored f(c, require_phi0(c));
    const double r = f.phi0;
    const double sr = std::sqrt(r);
    const double prefactor = -std::sqrt(2.0) / (4.0 * f.g0);
    auto integrand = [&](double u) {
        const double x = r * (1.0 - u * u);
        const double px = f.p(x);
        // D(x) - D(0) = x Dq(x) and phi0 D(0) = g0 cancel the 1/x.
        const double num = 4.0 * r * r * px + r * r * f.divided_q(x) - f.g0;
        return 2.0 * sr * num / (px * std::sqrt(px));
    };
    return finish(f, JFormula::GaugeFormAlt, prefactor, integrand, opts);
}

StabilityValue stability_j(const GeneralCoeffs& c, const QuadOptions& opts) {
    switch (opts.formula) {
        case JFormula::UnitInterval: return j_unit_interval(c, opts);
        case JFormula::XForm: return j_x_form(c, opts);
        case JFormula::GaugeForm: return j_gauge_form(c, opts);
        case JFormula::GaugeFormAlt: return j_gauge_form_alt(c, opts);
    }
    throw DomainError("unknown J formula");
}

StabilityValue stability_j(const ModelParams& p, const QuadOptions& opts) {
    const GeneralCoeffs c = p.coeffs();
    StabilityValue v = stability_j(c, opts);
    v.interior_zeros = interior_zero_count(c).count;
    return v;
}

}  // namespace tpnls
