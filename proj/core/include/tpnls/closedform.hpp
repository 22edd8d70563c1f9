#pragma once

#include "tpnls/potential.hpp"

namespace tpnls {

/// Q_p(x) = ((p+1)/2 sech^2((p-1)x/2))^(1/(p-1)), the ground state of
/// Q'' - Q + Q^p = 0.
double qp(double p, double x);

/// omega^(1/(p-1)) Q_p(sqrt(omega) x): solves phi'' = omega phi - phi^p.
double phi_single(double p, double omega, double x);

/// Explicit solutions of phi'' = omega phi - a1 phi^(1+1/beta) - a2 phi^(1+2/beta),
/// one parameter ell in (-1, inf) \ {-1/2, 0} covering all sign cases.
struct DoublePowerFamily {
    double beta = 1.0;
    double ell = 1.0;

    double A() const;
    double B() const;
    double C() const;
    int a1() const;
    int a2() const;
    double k() const;
    double lambda() const;
    double omega() const;

    /// Throws DomainError for beta <= 0 or a forbidden ell.
    void validate() const;
    /// Quartic-family embedding; exists only for beta = 1 (exponents 2 and 3).
    GeneralCoeffs general_coeffs() const;
};

/// k (ell + cosh^2(lambda x))^(-beta).
double double_power_profile(const DoublePowerFamily& fam, double x);

/// beta (beta + 1) / (2 beta + 1)^2, the limit of omega as ell -> inf.
double omega_star(double beta);

/// d omega / d ell = 4 omega* sgn(ell) / (2 ell + 1)^3.
double domega_dell(double beta, double ell);

/// g(x) = -x (x - a)(x - b)(x - x3) in the F*F case.
struct Example35 {
    double omega;
    double gamma;
    double a, b, x3;
};

/// x3 = (1 - ab)/(a + b), omega = ab x3, gamma = a + b + x3.
Example35 example35_coeffs(double a, double b);

}  // namespace tpnls
