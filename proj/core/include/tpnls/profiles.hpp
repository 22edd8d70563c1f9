#pragma once

#include <string_view>
#include <vector>

#include "tpnls/potential.hpp"

namespace tpnls {

enum class ProfileMethod { Shoot, Quadrature, Picard, Bvp };
std::string_view method_name(ProfileMethod m);

/// Uniform grid t_i = i dt, i = 0..N with N = round(T / dt).
/// With auto_shrink, T is capped at 20 once dt <= 1e-3.
struct GridSpec {
    double T = 50.0;
    double dt = 0.01;
    bool auto_shrink = true;

    double effective_T() const;
    int intervals() const;
};

struct ProfileSolution {
    std::vector<double> t;
    std::vector<double> phi;
    ProfileMethod method = ProfileMethod::Bvp;
    GeneralCoeffs coeffs;
    double phi0 = 0.0;  // first positive zero of G, not phi[0]
    double dt = 0.0;
    /// max over interior nodes of |phi'^2/2 - G(phi)| (central differences),
    /// divided by max G(phi_i).
    double energy_residual = 0.0;
    /// max(|phi[0] - phi0|, |phi[N]|).
    double bc_residual = 0.0;
    int iterations = 0;
    /// Update or residual norm per iteration for the iterative methods.
    std::vector<double> trace;

    double T() const { return t.empty() ? 0.0 : t.back(); }
};

/// Fills energy_residual and bc_residual from t/phi/coeffs/phi0.
void update_diagnostics(ProfileSolution& s);

enum class StopReason { TimeExhausted, StepUnderflow };

struct ShootResult {
    std::vector<double> t;
    std::vector<double> phi;
    std::vector<double> dphi;
    double stop_time = 0.0;
    StopReason stop_reason = StopReason::TimeExhausted;
    GeneralCoeffs coeffs;
    double phi0 = 0.0;
    double T = 0.0;
};

/// Dormand-Prince 5(4) with the error norm and step control of MATLAB's
/// ode45: relative error against max(|y|, abs_tol/rel_tol), initial and
/// maximum step from T/10, step underflow below 16 eps(t).
struct ShootOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-6;
    long max_steps = 20'000'000;
};

/// Integrates phi'' = g(phi) from (phi0, 0) over [0, T]. g is the plain
/// polynomial, also for phi < 0.
ShootResult shoot(const GeneralCoeffs& c, double T, const ShootOptions& opts = {});

/// Truncates at T1 = min(first turning point, first phi < 0, stop time),
/// samples [0, T1) on the uniform grid by cubic Hermite interpolation and
/// zero-extends to raw.T. Ties between the triggers go to the earlier time.
ProfileSolution crop(const ShootResult& raw, double dt);

/// Discrete crop of uniform samples: zero from the first node that is
/// negative or rises above its predecessor. Idempotent.
ProfileSolution crop(const ProfileSolution& s);

/// Inverts t(phi) = integral from phi to phi0 of dx / sqrt(2 G(x)).
/// phi_samples controls the resolution of the singular peak region; the tail
/// is sampled in log phi.
ProfileSolution quadrature_profile(const GeneralCoeffs& c, const GridSpec& grid = {}, int phi_samples = 2000);

/// Peak condition of the discretized boundary-value problem. PeakNeumann
/// reflects the grid at t = 0 (phi_{-1} = phi_1); PeakDirichlet pins
/// phi(0) = phi0. The far end is always phi(T) = 0.
enum class BoundaryMode { PeakNeumann, PeakDirichlet };

/// Standard: (u_{i-1} - 2u_i + u_{i+1}) / dt^2 = g(u_i).
/// Numerov: same left side = (g_{i-1} + 10 g_i + g_{i+1}) / 12.
enum class Stencil { Standard, Numerov };

struct PicardOptions {
    int max_iters = 200;
    double tol = 1e-12;
    BoundaryMode boundary = BoundaryMode::PeakNeumann;
    Stencil stencil = Stencil::Numerov;
};

/// Solves L v = F0 + N(v), L the stencil linearized at u0, by
/// v1 = L^-1 F0, v_{k+1} = v1 + L^-1 N(v_k), and returns u0 + v.
/// u0 is resampled onto the dt grid over [0, u0.T()]. A singular L is retried
/// once with dt * 1.003.
ProfileSolution picard_solve(const GeneralCoeffs& c, const ProfileSolution& u0, double dt,
                             const PicardOptions& opts = {});

struct BvpOptions {
    int max_iters = 100;
    double tol = 1e-12;
    BoundaryMode boundary = BoundaryMode::PeakNeumann;
    Stencil stencil = Stencil::Standard;
};

/// Damped Newton on the discretized system; each step is halved until the
/// residual max-norm decreases.
ProfileSolution bvp_solve(const GeneralCoeffs& c, const ProfileSolution& u0, double dt, const BvpOptions& opts = {});

/// 2 * integral over [0, T] of phi^2 (composite Simpson, 3/8 rule on the last
/// three intervals when their count is odd).
double mass(const ProfileSolution& s);

/// sup |a - b| over the nodes common to both grids (one grid step must be an
/// integer multiple of the other).
double sup_distance(const ProfileSolution& a, const ProfileSolution& b);

/// Convenience pipeline: quadrature profile as initial guess, then bvp_solve.
ProfileSolution solve_profile(const GeneralCoeffs& c, const GridSpec& grid = {}, const BvpOptions& opts = {});

inline ShootResult shoot(const ModelParams& p, double T, const ShootOptions& opts = {}) {
    return shoot(p.coeffs(), T, opts);
}
inline ProfileSolution quadrature_profile(const ModelParams& p, const GridSpec& grid = {}, int phi_samples = 2000) {
    return quadrature_profile(p.coeffs(), grid, phi_samples);
}
inline ProfileSolution picard_solve(const ModelParams& p, const ProfileSolution& u0, double dt,
                                    const PicardOptions& opts = {}) {
    return picard_solve(p.coeffs(), u0, dt, opts);
}
inline ProfileSolution bvp_solve(const ModelParams& p, const ProfileSolution& u0, double dt,
                                 const BvpOptions& opts = {}) {
    return bvp_solve(p.coeffs(), u0, dt, opts);
}

}  // namespace tpnls
