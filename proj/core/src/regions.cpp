#include "tpnls/regions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace tpnls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(k) for k in [0, n) on up to `threads` workers with static
// interleaved assignment, so results never depend on scheduling.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
    unsigned workers = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = unsigned(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < n && !failed; k += workers) fn(k);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct NodeValue {
    NodeClass cls;
    double j;
};

NodeValue evaluate_node(CaseSigns s, double omega, double gamma, const QuadOptions& quad) {
    const ModelParams p{s, omega, gamma};
    const GeneralCoeffs c = p.coeffs();
    const ExistenceClass e = classify_existence(c);
    if (std::holds_alternative<NoPositiveZero>(e)) return {NodeClass::None, kNaN};
    if (std::holds_alternative<BoundaryDoubleZero>(e)) return {NodeClass::Boundary, kNaN};
    try {
        return {NodeClass::Exists, stability_j(c, quad).j};
    } catch (const QuadratureNonConvergent&) {
        return {NodeClass::Exists, kNaN};
    }
}

std::optional<StabilityValue> try_j(CaseSigns s, double omega, double gamma, double rel_tol) {
    if (!(omega > 0.0)) return std::nullopt;
    QuadOptions q;
    q.rel_tol = rel_tol;
    try {
        return stability_j(ModelParams{s, omega, gamma}.coeffs(), q);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw DomainError("linspace needs n >= 2");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[std::size_t(i)] = lo + i * (hi - lo) / (n - 1);
    v.back() = hi;
    return v;
}

void Window::validate() const {
    if (!(omega_lo < omega_hi) || !(gamma_lo < gamma_hi)) throw DomainError("window needs lo < hi on both axes");
    if (n_omega < 2 || n_gamma < 2) throw DomainError("window needs at least 2 nodes per axis");
    if (!(omega_lo > 0.0)) throw DomainError("window needs omega > 0");
}

double Window::omega_at(int i) const {
    if (i == n_omega - 1) return omega_hi;
    if (omega_scale == AxisScale::Log) {
        const double a = std::log(omega_lo);
        const double b = std::log(omega_hi);
        return i == 0 ? omega_lo : std::exp(a + i * (b - a) / (n_omega - 1));
    }
    return omega_lo + i * (omega_hi - omega_lo) / (n_omega - 1);
}

double Window::gamma_at(int j) const {
    if (j == n_gamma - 1) return gamma_hi;
    return gamma_lo + j * (gamma_hi - gamma_lo) / (n_gamma - 1);
}

double Window::d_omega() const { return (omega_hi - omega_lo) / (n_omega - 1); }
double Window::d_gamma() const { return (gamma_hi - gamma_lo) / (n_gamma - 1); }

std::string_view node_class_name(NodeClass c) {
    switch (c) {
        case NodeClass::Exists: return "exists";
        case NodeClass::Boundary: return "boundary";
        case NodeClass::None: return "none";
    }
    return "unknown";
}

ScalarField sweep(CaseSigns s, const Window& w, const SweepOptions& opts) {
    w.validate();
    ScalarField f;
    f.signs = s;
    f.window = w;
    const std::size_t n = std::size_t(w.n_omega) * std::size_t(w.n_gamma);
    f.cls.assign(n, NodeClass::None);
    f.j.assign(n, kNaN);
    std::vector<double> om(static_cast<std::size_t>(w.n_omega)), ga(static_cast<std::size_t>(w.n_gamma));
    for (int i = 0; i < w.n_omega; ++i) om[std::size_t(i)] = w.omega_at(i);
    for (int j = 0; j < w.n_gamma; ++j) ga[std::size_t(j)] = w.gamma_at(j);
    parallel_for(n, opts.threads, [&](std::size_t k) {
        const std::size_t i = k % std::size_t(w.n_omega);
        const std::size_t j = k / std::size_t(w.n_omega);
        const NodeValue v = evaluate_node(s, om[i], ga[j], opts.quad);
        f.cls[k] = v.cls;
        f.j[k] = v.j;
    });
    return f;
}

std::vector<ParamCurve> extract_level_curves(const ScalarField& field, const std::vector<double>& levels) {
    const Window& w = field.window;
    const int nx = w.n_omega;
    const int ny = w.n_gamma;
    const bool log_axis = w.omega_scale == AxisScale::Log;
    std::vector<double> xs(static_cast<std::size_t>(nx)), ys(static_cast<std::size_t>(ny));
    for (int i = 0; i < nx; ++i) xs[std::size_t(i)] = log_axis ? std::log(w.omega_at(i)) : w.omega_at(i);
    for (int j = 0; j < ny; ++j) ys[std::size_t(j)] = w.gamma_at(j);

    // Edge ids: horizontal (i,j)-(i+1,j) first, then vertical (i,j)-(i,j+1).
    const long h_count = long(nx - 1) * ny;
    auto h_edge = [&](int i, int j) { return long(j) * (nx - 1) + i; };
    auto v_edge = [&](int i, int j) { return h_count + long(j) * nx + i; };

    std::vector<ParamCurve> out;
    for (double level : levels) {
        std::map<long, CurvePoint> where;
        std::map<long, std::vector<long>> adj;  // edge -> neighbouring edges
        auto value = [&](int i, int j) { return field.j[field.index(i, j)]; };
        auto cross = [&](int i0, int j0, int i1, int j1) {
            const double a = value(i0, j0);
            const double b = value(i1, j1);
            const double t = (level - a) / (b - a);
            const double x = xs[std::size_t(i0)] + t * (xs[std::size_t(i1)] - xs[std::size_t(i0)]);
            const double y = ys[std::size_t(j0)] + t * (ys[std::size_t(j1)] - ys[std::size_t(j0)]);
            return CurvePoint{log_axis ? std::exp(x) : x, y};
        };

        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i + 1 < nx; ++i) {
                const int ci[4] = {i, i + 1, i + 1, i};
                const int cj[4] = {j, j, j + 1, j + 1};
                double v[4];
                bool masked = false;
                for (int q = 0; q < 4; ++q) {
                    v[q] = value(ci[q], cj[q]);
                    if (v[q] != v[q]) masked = true;
                }
                if (masked) continue;
                bool above[4];
                for (int q = 0; q < 4; ++q) above[q] = v[q] >= level;
                // Edge q joins corner q and corner q+1 (bottom, right, top, left).
                const long ids[4] = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
                std::vector<int> crossed;
                for (int q = 0; q < 4; ++q)
                    if (above[q] != above[(q + 1) % 4]) crossed.push_back(q);
                if (crossed.empty()) continue;
                for (int q : crossed) {
                    if (!where.count(ids[q])) {
                        const int r = (q + 1) % 4;
                        where[ids[q]] = cross(ci[q], cj[q], ci[r], cj[r]);
                    }
                }
                auto link = [&](int qa, int qb) {
                    adj[ids[qa]].push_back(ids[qb]);
                    adj[ids[qb]].push_back(ids[qa]);
                };
                if (crossed.size() == 2) {
                    link(crossed[0], crossed[1]);
                } else {
                    const bool center_above = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
                    if (center_above == above[0]) {
                        link(0, 1);  // isolate corner 1
                        link(2, 3);  // isolate corner 3
                    } else {
                        link(3, 0);  // isolate corner 0
                        link(1, 2);  // isolate corner 2
                    }
                }
            }
        }

        std::map<long, bool> used;
        auto walk = [&](long start) {
            ParamCurve c;
            c.kind = CurveKind::LevelSet;
            c.level = level;
            long prev = -1;
            long cur = start;
            for (;;) {
                used[cur] = true;
                c.points.push_back(where[cur]);
                long next = -1;
                for (long nb : adj[cur]) {
                    if (nb != prev && !used[nb]) {
                        next = nb;
                        break;
                    }
                }
                if (next < 0) {
                    for (long nb : adj[cur])
                        if (nb == start && prev != start && c.points.size() > 2) c.closed = true;
                    break;
                }
                prev = cur;
                cur = next;
            }
            if (c.closed) c.points.push_back(c.points.front());
            return c;
        };
        for (const auto& [e, nbs] : adj)
            if (nbs.size() == 1 && !used[e]) out.push_back(walk(e));
        for (const auto& [e, nbs] : adj)
            if (!used[e]) out.push_back(walk(e));
    }
    return out;
}

CrCurve trace_gamma_cr(CaseSigns s, const std::vector<double>& omega_samples, double gamma_lo, double gamma_hi,
                       int n_gamma, const SweepOptions& opts) {
    const std::vector<double> gammas = linspace(gamma_lo, gamma_hi, n_gamma);
    const std::size_t nw = omega_samples.size();
    const std::size_t ng = gammas.size();
    std::vector<double> js(nw * ng, kNaN);
    parallel_for(nw * ng, opts.threads, [&](std::size_t k) {
        js[k] = evaluate_node(s, omega_samples[k / ng], gammas[k % ng], opts.quad).j;
    });

    CrCurve curve;
    curve.method = CrMethod::MeshBracket;
    curve.d_gamma = (gamma_hi - gamma_lo) / (n_gamma - 1);
    for (std::size_t c = 0; c < nw; ++c) {
        CrColumn col{omega_samples[c], {}};
        const double* jc = js.data() + c * ng;
        for (std::size_t l = 0; l + 1 < ng; ++l)
            if (jc[l] >= 0.0 && jc[l + 1] < 0.0) col.brackets.push_back(gammas[l]);
        if (col.has_sign_change()) curve.points.push_back({col.omega, col.brackets.back(), false});
        curve.columns.push_back(std::move(col));
    }
    return curve;
}

RefineNonConvergence::RefineNonConvergence(const RefineResult& best)
    : NonConvergenceError([&] {
          std::ostringstream os;
          os.precision(17);
          os << "root refinement did not converge; best iterate (" << best.omega << ", " << best.gamma
             << ") with J = " << best.j;
          return os.str();
      }()),
      best_(best) {}

RefineResult refine_root(CaseSigns s, double omega, double gamma, const RefineOptions& opts) {
    const double om_lo = omega - opts.max_cells * opts.cell_omega;
    const double om_hi = omega + opts.max_cells * opts.cell_omega;
    const double ga_lo = gamma - opts.max_cells * opts.cell_gamma;
    const double ga_hi = gamma + opts.max_cells * opts.cell_gamma;

    auto at = [&](double w, double g) { return try_j(s, w, g, opts.quad_rel_tol); };
    const auto start = at(omega, gamma);
    if (!start) throw NotExistsError("refine_root seed is not a point where J is defined");

    RefineResult best{omega, gamma, start->j, start->scale, 0, false};
    auto done = [&](const RefineResult& r) { return std::abs(r.j) <= opts.residual_tol * r.scale; };
    if (done(best)) {
        best.converged = true;
        return best;
    }

    double lambda = -1.0;
    for (int it = 1; it <= opts.max_iters; ++it) {
        best.iterations = it;
        const double hw = std::max(1e-2 * opts.cell_omega, 1e-9 * (1.0 + std::abs(best.omega)));
        const double hg = std::max(1e-2 * opts.cell_gamma, 1e-9 * (1.0 + std::abs(best.gamma)));
        const auto wp = at(best.omega + hw, best.gamma);
        const auto wm = at(best.omega - hw, best.gamma);
        const auto gp = at(best.omega, best.gamma + hg);
        const auto gm = at(best.omega, best.gamma - hg);
        if (!wp || !wm || !gp || !gm) break;
        const double dw = (wp->j - wm->j) / (2.0 * hw);
        const double dg = (gp->j - gm->j) / (2.0 * hg);
        const double norm2 = dw * dw + dg * dg;
        if (!(norm2 > 0.0)) break;
        if (lambda < 0.0) lambda = 1e-6 * norm2;

        bool accepted = false;
        while (lambda < 1e12 * norm2) {
            const double f = -best.j / (norm2 + lambda);
            const double w = std::clamp(best.omega + f * dw, om_lo, om_hi);
            const double g = std::clamp(best.gamma + f * dg, ga_lo, ga_hi);
            const auto trial = at(w, g);
            if (trial && std::abs(trial->j) < std::abs(best.j)) {
                best.omega = w;
                best.gamma = g;
                best.j = trial->j;
                best.scale = trial->scale;
                lambda *= 0.1;
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (done(best)) {
            best.converged = true;
            return best;
        }
        if (!accepted) break;
    }
    throw RefineNonConvergence(best);
}

std::vector<Window> default_min_schedule(int mesh_divisor) {
    if (mesh_divisor < 1) throw DomainError("mesh divisor must be >= 1");
    auto mesh = [&](int n) { return std::max(2, n / mesh_divisor); };
    const double omega1 = ff_endpoint().omega;
    return {
        {omega1 + 1e-4, 1.6656, 1.55, 1.8, mesh(300), mesh(1000), AxisScale::Linear},
        {0.5, 0.6, 1.57, 1.59, mesh(200), mesh(800), AxisScale::Linear},
        {0.55, 0.56, 1.58168, 1.58172, mesh(400), mesh(160), AxisScale::Linear},
    };
}

MinPointResult find_min_point(CaseSigns s, const std::vector<Window>& schedule, const SweepOptions& opts) {
    if (!(s == kFF)) throw DomainError("the minimal point of the stability curve is defined for F*F");
    if (schedule.empty()) throw DomainError("find_min_point needs at least one window");
    MinPointResult res;
    for (const Window& w : schedule) {
        w.validate();
        std::vector<double> omegas(static_cast<std::size_t>(w.n_omega));
        for (int i = 0; i < w.n_omega; ++i) omegas[std::size_t(i)] = w.omega_at(i);
        const CrCurve cr = trace_gamma_cr(s, omegas, w.gamma_lo, w.gamma_hi, w.n_gamma, opts);
        if (cr.points.empty()) throw NonConvergenceError("no sign change of J in any column of the window");

        WindowResult row;
        row.window = w;
        row.gamma_star = std::numeric_limits<double>::infinity();
        for (const CrColumn& col : cr.columns) {
            if (col.has_sign_change()) ++row.columns_with_sign_change;
            if (col.brackets.size() > 1) ++row.columns_non_monotone;
        }
        for (const CrPoint& p : cr.points) row.gamma_star = std::min(row.gamma_star, p.gamma);
        row.omega_star_lo = std::numeric_limits<double>::infinity();
        row.omega_star_hi = -std::numeric_limits<double>::infinity();
        for (const CrPoint& p : cr.points) {
            if (p.gamma == row.gamma_star) {
                row.omega_star_lo = std::min(row.omega_star_lo, p.omega);
                row.omega_star_hi = std::max(row.omega_star_hi, p.omega);
            }
        }

        RefineOptions ro;
        ro.cell_omega = w.d_omega();
        ro.cell_gamma = w.d_gamma();
        std::vector<std::optional<RefineResult>> refined(cr.points.size());
        parallel_for(cr.points.size(), opts.threads, [&](std::size_t k) {
            try {
                refined[k] = refine_root(s, cr.points[k].omega, cr.points[k].gamma, ro);
            } catch (const Error&) {
                refined[k] = std::nullopt;
            }
        });
        CrCurve m2;
        m2.method = CrMethod::RootRefined;
        m2.d_gamma = cr.d_gamma;
        row.gamma2 = std::numeric_limits<double>::infinity();
        for (const auto& r : refined) {
            if (!r) {
                ++row.refine_failures;
                continue;
            }
            ++row.refined_points;
            m2.points.push_back({r->omega, r->gamma, true});
            if (r->gamma < row.gamma2) {
                row.gamma2 = r->gamma;
                row.omega2 = r->omega;
            }
        }
        if (row.refined_points == 0) throw NonConvergenceError("root refinement failed at every seed");
        if (!res.rows.empty()) {
            row.delta_omega2 = row.omega2 - res.rows.back().omega2;
            row.delta_gamma2 = row.gamma2 - res.rows.back().gamma2;
        }
        res.window_trace.push_back(w);
        res.rows.push_back(row);
        res.curves.push_back(std::move(m2));
    }
    const WindowResult& last = res.rows.back();
    res.gamma2 = last.gamma2;
    res.omega2_point = last.omega2;
    res.omega2_lo = last.omega_star_lo;
    res.omega2_hi = last.omega_star_hi;
    return res;
}

}  // namespace tpnls
