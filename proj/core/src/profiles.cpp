#include "tpnls/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "factored.hpp"
#include "tpnls/errors.hpp"
#include "tpnls/quadrature.hpp"

namespace tpnls {

namespace {

double eps_at(double t) { return std::nextafter(std::abs(t), std::numeric_limits<double>::infinity()) - std::abs(t); }

std::vector<double> uniform_times(int n, double dt) {
    std::vector<double> t(std::size_t(n) + 1);
    for (int i = 0; i <= n; ++i) t[std::size_t(i)] = i * dt;
    return t;
}

int interval_count(double T, double dt) {
    if (!(dt > 0.0) || !(T > 0.0)) throw DomainError("profile grids need T > 0 and dt > 0");
    const int n = int(std::lround(T / dt));
    if (n < 2) throw DomainError("profile grid has fewer than two intervals");
    return n;
}

double hermite(double t0, double t1, double y0, double y1, double m0, double m1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

// Linear resampling of s onto n intervals of width dt.
std::vector<double> resample(const ProfileSolution& s, int n, double dt) {
    std::vector<double> out(std::size_t(n) + 1, 0.0);
    const double sdt = s.dt > 0.0 ? s.dt : (s.t.size() > 1 ? s.t[1] - s.t[0] : 1.0);
    const std::size_t last = s.phi.size() - 1;
    for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        const double pos = t / sdt;
        std::size_t k = std::size_t(std::floor(pos));
        if (k >= last) {
            out[std::size_t(i)] = k == last && pos - double(k) < 1e-9 ? s.phi[last] : 0.0;
            continue;
        }
        const double w = pos - double(k);
        out[std::size_t(i)] = (1.0 - w) * s.phi[k] + w * s.phi[k + 1];
    }
    return out;
}

// LU of a tridiagonal matrix without pivoting; a: sub, b: diag, c: super.
class Tridiag {
public:
    Tridiag(std::vector<double> a, std::vector<double> b, std::vector<double> c)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), l_(b_.size(), 0.0), u_(b_.size(), 0.0) {
        const std::size_t n = b_.size();
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(b_[i]) + std::abs(a_[i]) + std::abs(c_[i]));
        u_[0] = b_[0];
        for (std::size_t i = 1; i < n; ++i) {
            check_pivot(u_[i - 1], scale);
            l_[i] = a_[i] / u_[i - 1];
            u_[i] = b_[i] - l_[i] * c_[i - 1];
        }
        check_pivot(u_[n - 1], scale);
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        const std::size_t n = b_.size();
        std::vector<double> y(rhs);
        for (std::size_t i = 1; i < n; ++i) y[i] -= l_[i] * y[i - 1];
        y[n - 1] /= u_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) y[i] = (y[i] - c_[i] * y[i + 1]) / u_[i];
        // A solution that does not reproduce its right-hand side marks a numerical kernel.
        double res = 0.0;
        double ref = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ax = b_[i] * y[i];
            if (i > 0) ax += a_[i] * y[i - 1];
            if (i + 1 < n) ax += c_[i] * y[i + 1];
            res = std::max(res, std::abs(ax - rhs[i]));
            ref = std::max(ref, std::abs(rhs[i]));
        }
        if (!std::isfinite(res) || res > 1e-6 * ref + 1e-300) throw SingularOperatorError("linear operator is numerically singular");
        return y;
    }

    void multiply_add(const std::vector<double>& x, std::vector<double>& out) const {
        const std::size_t n = b_.size();
        for (std::size_t i = 0; i < n; ++i) {
            double ax = b_[i] * x[i];
            if (i > 0) ax += a_[i] * x[i - 1];
            if (i + 1 < n) ax += c_[i] * x[i + 1];
            out[i] += ax;
        }
    }

private:
    static void check_pivot(double p, double scale) {
        if (!(std::abs(p) > 1e-13 * scale)) throw SingularOperatorError("zero pivot in tridiagonal solve");
    }
    std::vector<double> a_, b_, c_, l_, u_;
};

// Discretized profile equation on nodes 0..n, scaled by dt^2. The unknowns
// are nodes first..n-1; node n is 0 and, for PeakDirichlet, node 0 is phi0.
struct Discretization {
    GeneralCoeffs c;
    double dt;
    int n;
    BoundaryMode mode;
    Stencil stencil;
    double phi0;

    int first() const { return mode == BoundaryMode::PeakNeumann ? 0 : 1; }
    int unknowns() const { return n - first(); }

    void apply_bc(std::vector<double>& u) const {
        u[std::size_t(n)] = 0.0;
        if (mode == BoundaryMode::PeakDirichlet) u[0] = phi0;
    }

    std::vector<double> residual(const std::vector<double>& u) const {
        const double h2 = dt * dt;
        std::vector<double> g(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = potential_deriv(c, u[i]);
        std::vector<double> r(static_cast<std::size_t>(unknowns()));
        for (int i = first(); i < n; ++i) {
            const std::size_t k = std::size_t(i);
            const double um = i == 0 ? u[1] : u[k - 1];
            const double gm = i == 0 ? g[1] : g[k - 1];
            const double lap = um - 2.0 * u[k] + u[k + 1];
            const double src = stencil == Stencil::Standard ? g[k] : (gm + 10.0 * g[k] + g[k + 1]) / 12.0;
            r[std::size_t(i - first())] = lap - h2 * src;
        }
        return r;
    }

    Tridiag jacobian(const std::vector<double>& u) const {
        const double h2 = dt * dt;
        const std::size_t m = std::size_t(unknowns());
        std::vector<double> a(m, 0.0), b(m, 0.0), cc(m, 0.0);
        auto dg = [&](int i) { return potential_deriv2(c, u[std::size_t(i)]); };
        for (int i = first(); i < n; ++i) {
            const std::size_t row = std::size_t(i - first());
            if (stencil == Stencil::Standard) {
                b[row] = -2.0 - h2 * dg(i);
                if (row > 0) a[row] = 1.0;
                if (i + 1 < n) cc[row] = i == 0 ? 2.0 : 1.0;
            } else {
                b[row] = -2.0 - 10.0 * h2 * dg(i) / 12.0;
                if (row > 0) a[row] = 1.0 - h2 * dg(i - 1) / 12.0;
                if (i + 1 < n) cc[row] = i == 0 ? 2.0 - 2.0 * h2 * dg(1) / 12.0 : 1.0 - h2 * dg(i + 1) / 12.0;
            }
        }
        return Tridiag(std::move(a), std::move(b), std::move(cc));
    }

    void add_to_unknowns(std::vector<double>& u, const std::vector<double>& v, double w = 1.0) const {
        for (int i = first(); i < n; ++i) u[std::size_t(i)] += w * v[std::size_t(i - first())];
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

ProfileSolution make_solution(ProfileMethod m, const GeneralCoeffs& c, double phi0, double dt, std::vector<double> phi) {
    ProfileSolution s;
    s.method = m;
    s.coeffs = c;
    s.phi0 = phi0;
    s.dt = dt;
    s.t = uniform_times(int(phi.size()) - 1, dt);
    s.phi = std::move(phi);
    return s;
}

std::string trace_message(const std::string& head, const std::vector<double>& trace) {
    std::ostringstream os;
    os.precision(3);
    os << head << " (norms:";
    const std::size_t from = trace.size() > 8 ? trace.size() - 8 : 0;
    for (std::size_t i = from; i < trace.size(); ++i) os << ' ' << trace[i];
    os << ')';
    return os.str();
}

ProfileSolution picard_once(const GeneralCoeffs& c, const ProfileSolution& u0, double dt, const PicardOptions& opts) {
    const double phi0 = require_phi0(c);
    const int n = interval_count(u0.T(), dt);
    const Discretization disc{c, dt, n, opts.boundary, opts.stencil, phi0};
    std::vector<double> base = resample(u0, n, dt);
    disc.apply_bc(base);

    const Tridiag L = disc.jacobian(base);
    const std::vector<double> r0 = disc.residual(base);
    std::vector<double> f0(r0.size());
    for (std::size_t i = 0; i < r0.size(); ++i) f0[i] = -r0[i];
    const std::vector<double> v1 = L.solve(f0);

    // N(v) = -(R(u0 + v) - R(u0) - L v)
    auto nonlinear = [&](const std::vector<double>& v) {
        std::vector<double> u = base;
        disc.add_to_unknowns(u, v);
        std::vector<double> nv = disc.residual(u);
        for (std::size_t i = 0; i < nv.size(); ++i) nv[i] = -(nv[i] - r0[i]);
        L.multiply_add(v, nv);
        return nv;
    };

    std::vector<double> v = v1;
    std::vector<double> trace;
    const double scale = std::max(1.0, max_abs(base));
    bool done = false;
    int it = 1;
    for (; it < opts.max_iters; ++it) {
        std::vector<double> next = L.solve(nonlinear(v));
        double update = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] += v1[i];
            update = std::max(update, std::abs(next[i] - v[i]));
        }
        v = std::move(next);
        trace.push_back(update);
        if (!std::isfinite(update) || (trace.size() > 3 && update > 1e3 * trace.front()))
            throw NonConvergenceError(trace_message("Picard iteration diverged", trace));
        if (update <= opts.tol * scale) {
            done = true;
            break;
        }
    }
    if (!done) throw NonConvergenceError(trace_message("Picard iteration hit its iteration limit", trace));

    disc.add_to_unknowns(base, v);
    ProfileSolution s = make_solution(ProfileMethod::Picard, c, phi0, dt, std::move(base));
    s.iterations = it + 1;
    s.trace = std::move(trace);
    update_diagnostics(s);
    return s;
}

}  // namespace

std::string_view method_name(ProfileMethod m) {
    switch (m) {
        case ProfileMethod::Shoot: return "shoot";
        case ProfileMethod::Quadrature: return "quadrature";
        case ProfileMethod::Picard: return "picard";
        case ProfileMethod::Bvp: return "bvp";
    }
    return "unknown";
}

double GridSpec::effective_T() const { return auto_shrink && dt <= 1e-3 ? std::min(T, 20.0) : T; }

int GridSpec::intervals() const { return interval_count(effective_T(), dt); }

void update_diagnostics(ProfileSolution& s) {
    const std::size_t n = s.phi.size();
    double gmax = 0.0;
    for (double x : s.phi) gmax = std::max(gmax, potential(s.coeffs, x));
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d = (s.phi[i + 1] - s.phi[i - 1]) / (2.0 * s.dt);
        worst = std::max(worst, std::abs(0.5 * d * d - potential(s.coeffs, s.phi[i])));
    }
    s.energy_residual = gmax > 0.0 ? worst / gmax : worst;
    s.bc_residual = n ? std::max(std::abs(s.phi.front() - s.phi0), std::abs(s.phi.back())) : 0.0;
}

ShootResult shoot(const GeneralCoeffs& c, double T, const ShootOptions& opts) {
    if (!(T > 0.0)) throw DomainError("shoot needs T > 0");
    if (!(opts.rel_tol > 0.0 && opts.abs_tol > 0.0)) throw DomainError("shoot needs positive tolerances");
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    ShootResult out;
    out.coeffs = c;
    out.phi0 = require_phi0(c);
    out.T = T;

    struct Y {
        double p, q;
    };
    auto f = [&](const Y& y) { return Y{y.q, potential_deriv(c, y.p)}; };

    const double rtol = opts.rel_tol;
    const double threshold = opts.abs_tol / rtol;
    const double power = 1.0 / 5.0;
    const double hmax = 0.1 * T;

    double t = 0.0;
    Y y{out.phi0, 0.0};
    Y k1 = f(y);
    out.t.push_back(t);
    out.phi.push_back(y.p);
    out.dphi.push_back(y.q);

    double absh = std::min(hmax, T);
    {
        const double rh = std::max(std::abs(k1.p) / std::max(std::abs(y.p), threshold),
                                   std::abs(k1.q) / std::max(std::abs(y.q), threshold)) /
                          (0.8 * std::pow(rtol, power));
        if (absh * rh > 1.0) absh = 1.0 / rh;
    }

    for (long step = 0; step < opts.max_steps; ++step) {
        const double hmin = 16.0 * eps_at(t);
        absh = std::min(hmax, std::max(hmin, absh));
        double h = absh;
        bool last = false;
        if (1.1 * absh >= T - t) {
            h = T - t;
            absh = h;
            last = true;
        }
        bool nofailed = true;
        Y ynew{};
        Y k7{};
        double err = 0.0;
        for (;;) {
            const Y k2 = f({y.p + h * a21 * k1.p, y.q + h * a21 * k1.q});
            const Y k3 = f({y.p + h * (a31 * k1.p + a32 * k2.p), y.q + h * (a31 * k1.q + a32 * k2.q)});
            const Y k4 = f({y.p + h * (a41 * k1.p + a42 * k2.p + a43 * k3.p),
                            y.q + h * (a41 * k1.q + a42 * k2.q + a43 * k3.q)});
            const Y k5 = f({y.p + h * (a51 * k1.p + a52 * k2.p + a53 * k3.p + a54 * k4.p),
                            y.q + h * (a51 * k1.q + a52 * k2.q + a53 * k3.q + a54 * k4.q)});
            const Y k6 = f({y.p + h * (a61 * k1.p + a62 * k2.p + a63 * k3.p + a64 * k4.p + a65 * k5.p),
                            y.q + h * (a61 * k1.q + a62 * k2.q + a63 * k3.q + a64 * k4.q + a65 * k5.q)});
            ynew = {y.p + h * (b1 * k1.p + b3 * k3.p + b4 * k4.p + b5 * k5.p + b6 * k6.p),
                    y.q + h * (b1 * k1.q + b3 * k3.q + b4 * k4.q + b5 * k5.q + b6 * k6.q)};
            k7 = f(ynew);
            const double ep = e1 * k1.p + e3 * k3.p + e4 * k4.p + e5 * k5.p + e6 * k6.p + e7 * k7.p;
            const double eq = e1 * k1.q + e3 * k3.q + e4 * k4.q + e5 * k5.q + e6 * k6.q + e7 * k7.q;
            err = absh * std::max(std::abs(ep) / std::max({std::abs(y.p), std::abs(ynew.p), threshold}),
                                  std::abs(eq) / std::max({std::abs(y.q), std::abs(ynew.q), threshold}));
            if (std::isfinite(err) && err <= rtol) break;
            if (absh <= hmin) {
                out.stop_time = t;
                out.stop_reason = StopReason::StepUnderflow;
                return out;
            }
            if (nofailed && std::isfinite(err)) {
                nofailed = false;
                absh = std::max(hmin, absh * std::max(0.1, 0.8 * std::pow(rtol / err, power)));
            } else {
                absh = std::max(hmin, 0.5 * absh);
            }
            h = absh;
            last = false;
        }
        t = last ? T : t + h;
        y = ynew;
        k1 = k7;
        out.t.push_back(t);
        out.phi.push_back(y.p);
        out.dphi.push_back(y.q);
        if (last) {
            out.stop_time = T;
            out.stop_reason = StopReason::TimeExhausted;
            return out;
        }
        if (nofailed) {
            const double temp = 1.25 * std::pow(err / rtol, power);
            absh = temp > 0.2 ? absh / temp : 5.0 * absh;
        }
    }
    out.stop_time = t;
    out.stop_reason = StopReason::StepUnderflow;
    return out;
}

ProfileSolution crop(const ShootResult& raw, double dt) {
    if (raw.t.empty()) throw DomainError("crop needs a nonempty trajectory");
    double t1 = raw.stop_time;
    for (std::size_t k = 1; k < raw.t.size(); ++k) {
        const double ta = raw.t[k - 1];
        const double tb = raw.t[k];
        double hit = std::numeric_limits<double>::infinity();
        if (raw.phi[k] < 0.0) {
            const double w = raw.phi[k - 1] / (raw.phi[k - 1] - raw.phi[k]);
            hit = std::min(hit, ta + w * (tb - ta));
        }
        if (raw.dphi[k] >= 0.0) {
            const double da = raw.dphi[k - 1];
            const double w = da < 0.0 ? da / (da - raw.dphi[k]) : 0.0;
            hit = std::min(hit, ta + w * (tb - ta));
        }
        if (std::isfinite(hit)) {
            t1 = std::min(t1, hit);
            break;
        }
    }

    const int n = interval_count(raw.T, dt);
    std::vector<double> phi(std::size_t(n) + 1, 0.0);
    std::size_t k = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * dt;
        if (t >= t1 || t > raw.t.back()) break;
        while (k + 2 < raw.t.size() && raw.t[k + 1] < t) ++k;
        if (raw.t.size() == 1) {
            phi[std::size_t(i)] = raw.phi[0];
            continue;
        }
        const double v = hermite(raw.t[k], raw.t[k + 1], raw.phi[k], raw.phi[k + 1], raw.dphi[k], raw.dphi[k + 1], t);
        phi[std::size_t(i)] = std::max(0.0, v);
    }
    ProfileSolution s = make_solution(ProfileMethod::Shoot, raw.coeffs, raw.phi0, dt, std::move(phi));
    return crop(s);
}

ProfileSolution crop(const ProfileSolution& in) {
    ProfileSolution s = in;
    for (std::size_t i = 1; i < s.phi.size(); ++i) {
        if (s.phi[i] < 0.0 || s.phi[i] > s.phi[i - 1]) {
            std::fill(s.phi.begin() + std::ptrdiff_t(i), s.phi.end(), 0.0);
            break;
        }
    }
    if (!s.phi.empty() && s.phi[0] < 0.0) s.phi[0] = 0.0;
    update_diagnostics(s);
    return s;
}

ProfileSolution quadrature_profile(const GeneralCoeffs& c, const GridSpec& grid, int phi_samples) {
    if (phi_samples < 16) throw DomainError("quadrature_profile needs at least 16 peak samples");
    const detail::Factored f(c, require_phi0(c));
    const double r = f.phi0;
    const double T = grid.effective_T();
    const int n = grid.intervals();

    // Peak region x = r (1 - u^2), u in [0, 1/sqrt2]: dt/du = sqrt(2r) / (x sqrt(p)).
    // Tail x = e^y: dt/dy = -1 / sqrt(2 (r - x) p).
    std::vector<double> ts{0.0}, xs{r};
    const double u_end = 1.0 / std::sqrt(2.0);
    const double du = u_end / phi_samples;
    auto peak = [&](double u) {
        const double x = r * (1.0 - u * u);
        return std::sqrt(2.0 * r) / (x * std::sqrt(f.p(x)));
    };
    for (int j = 1; j <= phi_samples; ++j) {
        const double u = j * du;
        const QuadResult q = integrate_adaptive(peak, u - du, u, 1e-13, 20);
        ts.push_back(ts.back() + q.value);
        xs.push_back(j == phi_samples ? 0.5 * r : r * (1.0 - u * u));
    }
    auto tail = [&](double y) {
        const double x = std::exp(y);
        return 1.0 / std::sqrt(2.0 * (r - x) * f.p(x));
    };
    const double dy = 0.01;
    double y = std::log(0.5 * r);
    while (ts.back() <= T && xs.back() > 1e-290) {
        const QuadResult q = integrate_adaptive(tail, y - dy, y, 1e-13, 20);
        y -= dy;
        ts.push_back(ts.back() + q.value);
        xs.push_back(std::exp(y));
    }

    std::vector<double> ms(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) ms[k] = -f.sqrt_2g(xs[k]);
    // Fritsch-Carlson limiter keeps each Hermite piece monotone.
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double delta = (xs[k + 1] - xs[k]) / (ts[k + 1] - ts[k]);
        if (delta == 0.0) {
            ms[k] = ms[k + 1] = 0.0;
            continue;
        }
        const double al = ms[k] / delta;
        const double be = ms[k + 1] / delta;
        const double rad = al * al + be * be;
        if (rad > 9.0) {
            const double tau = 3.0 / std::sqrt(rad);
            ms[k] = tau * al * delta;
            ms[k + 1] = tau * be * delta;
        }
    }

    const double decay = std::sqrt(c.omega);
    std::vector<double> phi(std::size_t(n) + 1, 0.0);
    std::size_t k = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * grid.dt;
        while (k + 2 < ts.size() && ts[k + 1] < t) ++k;
        if (t <= ts.back()) {
            phi[std::size_t(i)] = hermite(ts[k], ts[k + 1], xs[k], xs[k + 1], ms[k], ms[k + 1], t);
        } else {
            phi[std::size_t(i)] = xs.back() * std::exp(-decay * (t - ts.back()));
        }
    }
    ProfileSolution s = make_solution(ProfileMethod::Quadrature, c, r, grid.dt, std::move(phi));
    update_diagnostics(s);
    return s;
}

ProfileSolution picard_solve(const GeneralCoeffs& c, const ProfileSolution& u0, double dt, const PicardOptions& opts) {
    try {
        return picard_once(c, u0, dt, opts);
    } catch (const SingularOperatorError&) {
        return picard_once(c, u0, dt * 1.003, opts);
    }
}

ProfileSolution bvp_solve(const GeneralCoeffs& c, const ProfileSolution& u0, double dt, const BvpOptions& opts) {
    const double phi0 = require_phi0(c);
    const int n = interval_count(u0.T(), dt);
    const Discretization disc{c, dt, n, opts.boundary, opts.stencil, phi0};
    std::vector<double> u = resample(u0, n, dt);
    disc.apply_bc(u);

    std::vector<double> trace;
    std::vector<double> r = disc.residual(u);
    double rnorm = max_abs(r);
    trace.push_back(rnorm);
    const double scale = std::max(1.0, max_abs(u));
    int it = 0;
    bool done = rnorm == 0.0;
    for (; !done && it < opts.max_iters; ++it) {
        std::vector<double> rhs(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
        const std::vector<double> delta = disc.jacobian(u).solve(rhs);
        const double dnorm = max_abs(delta);
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1.0 / 1024.0) {
            std::vector<double> trial = u;
            disc.add_to_unknowns(trial, delta, lambda);
            std::vector<double> rt = disc.residual(trial);
            const double tn = max_abs(rt);
            if (tn < rnorm) {
                u = std::move(trial);
                r = std::move(rt);
                rnorm = tn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        trace.push_back(rnorm);
        // A full step at rounding level means the residual cannot decrease further.
        if (dnorm * lambda <= opts.tol * scale || (!accepted && dnorm <= 1e3 * opts.tol * scale)) {
            done = true;
            ++it;
            break;
        }
        if (!accepted) throw NonConvergenceError(trace_message("Newton line search failed", trace));
    }
    if (!done) throw NonConvergenceError(trace_message("Newton iteration hit its iteration limit", trace));

    ProfileSolution s = make_solution(ProfileMethod::Bvp, c, phi0, dt, std::move(u));
    s.iterations = it;
    s.trace = std::move(trace);
    update_diagnostics(s);
    return s;
}

double mass(const ProfileSolution& s) {
    const std::size_t n = s.phi.size() - 1;
    if (s.phi.size() < 3) throw DomainError("mass needs at least two intervals");
    const double h = s.dt;
    auto sq = [&](std::size_t i) { return s.phi[i] * s.phi[i]; };
    std::size_t simpson_end = n % 2 == 0 ? n : n - 3;
    double sum = 0.0;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) sum += h / 3.0 * (sq(i) + 4.0 * sq(i + 1) + sq(i + 2));
    if (simpson_end != n) {
        const std::size_t i = simpson_end;
        sum += 3.0 * h / 8.0 * (sq(i) + 3.0 * sq(i + 1) + 3.0 * sq(i + 2) + sq(i + 3));
    }
    return 2.0 * sum;
}

double sup_distance(const ProfileSolution& a, const ProfileSolution& b) {
    const ProfileSolution& coarse = a.dt >= b.dt ? a : b;
    const ProfileSolution& fine = a.dt >= b.dt ? b : a;
    const double ratio = coarse.dt / fine.dt;
    const long r = std::lround(ratio);
    if (r < 1 || std::abs(ratio - double(r)) > 1e-9 * ratio) throw DomainError("sup_distance needs nested grids");
    double d = 0.0;
    for (std::size_t i = 0; i < coarse.phi.size(); ++i) {
        const std::size_t j = i * std::size_t(r);
        if (j >= fine.phi.size()) break;
        d = std::max(d, std::abs(coarse.phi[i] - fine.phi[j]));
    }
    return d;
}

ProfileSolution solve_profile(const GeneralCoeffs& c, const GridSpec& grid, const BvpOptions& opts) {
    const ProfileSolution guess = quadrature_profile(c, grid);
    return bvp_solve(c, guess, grid.dt, opts);
}

}  // namespace tpnls
