#include "tpnls/closedform.hpp"

#include <cmath>

#include "tpnls/errors.hpp"

namespace tpnls {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double qp(double p, double x) {
    if (!(p > 1.0)) throw DomainError("qp needs p > 1");
    const double sech = 1.0 / std::cosh(0.5 * (p - 1.0) * x);
    return std::pow(0.5 * (p + 1.0) * sech * sech, 1.0 / (p - 1.0));
}

double phi_single(double p, double omega, double x) {
    if (!(omega > 0.0)) throw DomainError("phi_single needs omega > 0");
    return std::pow(omega, 1.0 / (p - 1.0)) * qp(p, std::sqrt(omega) * x);
}

double DoublePowerFamily::A() const { return 4.0 * beta * beta; }
double DoublePowerFamily::B() const { return 2.0 * beta * (2.0 * beta + 1.0) * (2.0 * ell + 1.0); }
double DoublePowerFamily::C() const { return -4.0 * beta * (beta + 1.0) * ell * (ell + 1.0); }
int DoublePowerFamily::a1() const { return sign(B()); }
int DoublePowerFamily::a2() const { return sign(C()); }
double DoublePowerFamily::k() const { return std::pow(std::abs(C() / B()), beta); }
double DoublePowerFamily::lambda() const { return std::sqrt(std::abs(C())) / std::abs(B()); }

double DoublePowerFamily::omega() const {
    const double l = lambda();
    return 4.0 * beta * beta * l * l;
}

void DoublePowerFamily::validate() const {
    if (!(beta > 0.0)) throw DomainError("double-power family needs beta > 0");
    if (!(ell > -1.0) || ell == -0.5 || ell == 0.0) throw DomainError("double-power family needs ell in (-1, inf) \\ {-1/2, 0}");
}

GeneralCoeffs DoublePowerFamily::general_coeffs() const {
    validate();
    if (beta != 1.0) throw DomainError("only beta = 1 lies in the quartic family");
    return {omega(), double(a1()), double(a2()), 0.0};
}

double double_power_profile(const DoublePowerFamily& fam, double x) {
    fam.validate();
    const double ch = std::cosh(fam.lambda() * x);
    return fam.k() * std::pow(fam.ell + ch * ch, -fam.beta);
}

double omega_star(double beta) { return beta * (beta + 1.0) / ((2.0 * beta + 1.0) * (2.0 * beta + 1.0)); }

double domega_dell(double beta, double ell) {
    const double d = 2.0 * ell + 1.0;
    return 4.0 * omega_star(beta) * sign(ell) / (d * d * d);
}

Example35 example35_coeffs(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("example35_coeffs needs a, b > 0");
    if (!(a * b < 1.0)) throw DomainError("example35_coeffs needs ab < 1");
    const double x3 = (1.0 - a * b) / (a + b);
    return {a * b * x3, a + b + x3, a, b, x3};
}

}  // namespace tpnls
