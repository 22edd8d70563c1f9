#pragma once

#include <string_view>

#include "tpnls/errors.hpp"
#include "tpnls/potential.hpp"

namespace tpnls {

/// Integral representations of J(omega, gamma) = d/domega of the profile mass.
///
/// UnitInterval: the Iliev-Kirchev integral rescaled to s in (0, 1).
/// XForm:        the same integral after s = x^2, over x in (0, phi0).
/// GaugeForm:    XForm plus the exact derivative of 2A/sqrt(G) with
///               A(x) = x^4 - phi0 x^3; its numerator vanishes at x = phi0.
/// GaugeFormAlt: the gauge A(x) = phi0^2 x^2 - phi0 x^3.
///
/// Each integrand is evaluated through the factorizations
/// G(x) = (phi0 - x) x^2 p(x) and g(phi0) - g(x) = (phi0 - x) D(x) and the
/// substitution x = phi0 (1 - u^2), which removes the (phi0 - x)^(-1/2)
/// endpoint singularity and all cancellation near phi0.
enum class JFormula { UnitInterval, XForm, GaugeForm, GaugeFormAlt };

std::string_view formula_name(JFormula f);

struct QuadOptions {
    double rel_tol = 1e-10;
    int max_refinements = 30;
    JFormula formula = JFormula::GaugeForm;
};

struct StabilityValue {
    double j = 0.0;
    JFormula formula_used = JFormula::GaugeForm;
    double est_error = 0.0;
    /// |prefactor| * integral of |integrand|: the magnitude J is resolved against.
    double scale = 0.0;
    double phi0 = 0.0;
    int interior_zeros = 0;
    bool converged = true;
};

/// Thrown when the adaptive quadrature exhausts its refinement budget; the
/// partial value is attached.
class QuadratureNonConvergent : public NonConvergenceError {
public:
    QuadratureNonConvergent(const StabilityValue& partial);
    const StabilityValue& partial() const { return partial_; }

private:
    StabilityValue partial_;
};

StabilityValue j_unit_interval(const GeneralCoeffs& c, const QuadOptions& opts = {});
StabilityValue j_x_form(const GeneralCoeffs& c, const QuadOptions& opts = {});
StabilityValue j_gauge_form(const GeneralCoeffs& c, const QuadOptions& opts = {});
StabilityValue j_gauge_form_alt(const GeneralCoeffs& c, const QuadOptions& opts = {});

/// Dispatches on opts.formula. Throws NotExistsError off the existence region
/// and QuadratureNonConvergent when the tolerance is not met.
StabilityValue stability_j(const GeneralCoeffs& c, const QuadOptions& opts = {});

/// Canonical entry point: classification, then the gauge form with default
/// options; also records how many zeros g has inside (0, phi0).
StabilityValue stability_j(const ModelParams& p, const QuadOptions& opts = {});

}  // namespace tpnls
