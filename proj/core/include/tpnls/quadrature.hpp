#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace tpnls {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    /// Integral of |f|; the magnitude against which relative accuracy is judged.
    double l1 = 0.0;
    int panels = 0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half) and weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, error, l1;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const double sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double ah = std::abs(h);
    double err = std::abs((resk - resg) * h);
    resasc *= ah;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double resabs_h = resabs * ah;
    constexpr double kRound = 50.0 * 2.220446049250313e-16;
    if (resabs_h > 2.2250738585072014e-308 / kRound) err = std::max(kRound * resabs_h, err);
    return {a, b, resk * h, err, resabs_h, depth};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// error is at most rel_tol * max(|I|, 1e-2 * L1), where L1 = integral of |f|.
/// The L1 floor keeps integrals whose value cancels to ~0 attainable.
/// Gives up (converged = false) when a panel would exceed max_depth bisections
/// or max_panels is reached.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol, int max_depth = 30,
                              int max_panels = 4000) {
    std::priority_queue<detail::Panel> heap;
    detail::Panel first = detail::gk15(f, a, b, 0);
    heap.push(first);
    double value = first.value;
    double error = first.error;
    double l1 = first.l1;
    int evals = 15;
    QuadResult r;
    auto target = [&] { return rel_tol * std::max(std::abs(value), 1e-2 * l1); };
    while (error > target()) {
        const detail::Panel top = heap.top();
        if (top.depth >= max_depth || int(heap.size()) >= max_panels) {
            r.value = value;
            r.abs_error = error;
            r.l1 = l1;
            r.panels = int(heap.size());
            r.evaluations = evals;
            r.converged = false;
            return r;
        }
        heap.pop();
        const double mid = 0.5 * (top.a + top.b);
        const detail::Panel left = detail::gk15(f, top.a, mid, top.depth + 1);
        const detail::Panel right = detail::gk15(f, mid, top.b, top.depth + 1);
        evals += 30;
        value += left.value + right.value - top.value;
        error += left.error + right.error - top.error;
        l1 += left.l1 + right.l1 - top.l1;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    std::vector<detail::Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    value = error = l1 = 0.0;
    for (const auto& p : all) {
        value += p.value;
        error += p.error;
        l1 += p.l1;
    }
    r.value = value;
    r.abs_error = error;
    r.l1 = l1;
    r.panels = int(all.size());
    r.evaluations = evals;
    r.converged = true;
    return r;
}

}  // namespace tpnls
