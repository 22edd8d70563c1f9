#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tpnls/boundary.hpp"
#include "tpnls/errors.hpp"
#include "tpnls/potential.hpp"
#include "tpnls/stability.hpp"

namespace tpnls {

enum class AxisScale { Linear, Log };

/// Rectangular (omega, gamma) mesh with inclusive endpoints:
/// gamma_j = lo + j (hi - lo) / (n - 1); omega likewise, or evenly spaced in
/// log omega for AxisScale::Log.
struct Window {
    double omega_lo = 0.0;
    double omega_hi = 1.0;
    double gamma_lo = 0.0;
    double gamma_hi = 1.0;
    int n_omega = 2;
    int n_gamma = 2;
    AxisScale omega_scale = AxisScale::Linear;

    void validate() const;
    double omega_at(int i) const;
    double gamma_at(int j) const;
    double d_omega() const;
    double d_gamma() const;
};

std::vector<double> linspace(double lo, double hi, int n);

enum class NodeClass : std::uint8_t { Exists, Boundary, None };
std::string_view node_class_name(NodeClass c);

/// Row-major in gamma: node (i, j) sits at index j * n_omega + i.
/// j is NaN where undefined (not Exists, or quadrature failed).
struct ScalarField {
    CaseSigns signs = kFF;
    Window window;
    std::vector<NodeClass> cls;
    std::vector<double> j;

    std::size_t index(int i, int jg) const { return std::size_t(jg) * std::size_t(window.n_omega) + std::size_t(i); }
    bool defined(std::size_t k) const { return j[k] == j[k]; }
};

struct SweepOptions {
    QuadOptions quad;
    /// 0 = hardware concurrency.
    int threads = 0;
};

/// Classifies every node and evaluates J at the Exists nodes.
ScalarField sweep(CaseSigns s, const Window& w, const SweepOptions& opts = {});

/// Marching squares on the defined nodes. Cells touching an undefined node
/// are skipped, saddles are resolved by the cell-center average, and
/// crossings are interpolated in plotted coordinates (log omega on a log
/// axis). Polylines are open (ending on the grid or mask boundary) or closed.
std::vector<ParamCurve> extract_level_curves(const ScalarField& field, const std::vector<double>& levels);

struct CrPoint {
    double omega;
    double gamma;
    bool refined;
};

enum class CrMethod { MeshBracket, RootRefined };

/// Scan of one omega column: every gamma_l with J(gamma_l) >= 0 > J(gamma_{l+1}).
struct CrColumn {
    double omega;
    std::vector<double> brackets;
    bool has_sign_change() const { return !brackets.empty(); }
};

struct CrCurve {
    std::vector<CrPoint> points;
    CrMethod method = CrMethod::MeshBracket;
    std::vector<CrColumn> columns;
    double d_gamma = 0.0;
};

/// Method 1: for each omega sample, J on gamma_l = lo + l (hi - lo)/(n - 1);
/// the column's point is the lower edge of its last + to - bracket. Columns
/// without a sign change contribute no point.
CrCurve trace_gamma_cr(CaseSigns s, const std::vector<double>& omega_samples, double gamma_lo, double gamma_hi,
                       int n_gamma, const SweepOptions& opts = {});

struct RefineOptions {
    int max_iters = 50;
    double residual_tol = 1e-11;  // relative to StabilityValue::scale
    double quad_rel_tol = 1e-11;
    /// The iterate stays within max_cells * cell of the seed on each axis.
    double cell_omega = 1e-3;
    double cell_gamma = 1e-3;
    double max_cells = 2.0;
};

struct RefineResult {
    double omega;
    double gamma;
    double j;
    double scale;
    int iterations;
    bool converged;
};

class RefineNonConvergence : public NonConvergenceError {
public:
    explicit RefineNonConvergence(const RefineResult& best);
    const RefineResult& best() const { return best_; }

private:
    RefineResult best_;
};

/// Method 2: Levenberg-Marquardt on the scalar residual J(omega, gamma) with
/// a central-difference gradient; throws RefineNonConvergence with the best
/// iterate when the residual target is missed.
RefineResult refine_root(CaseSigns s, double omega, double gamma, const RefineOptions& opts = {});

struct WindowResult {
    Window window;
    /// Method 1.
    double gamma_star = 0.0;
    double omega_star_lo = 0.0;
    double omega_star_hi = 0.0;
    int columns_with_sign_change = 0;
    int columns_non_monotone = 0;
    /// Method 2.
    double omega2 = 0.0;
    double gamma2 = 0.0;
    int refined_points = 0;
    int refine_failures = 0;
    /// Change against the previous window (zero for the first).
    double delta_omega2 = 0.0;
    double delta_gamma2 = 0.0;
};

struct MinPointResult {
    double gamma2 = 0.0;
    double omega2_lo = 0.0;
    double omega2_hi = 0.0;
    double omega2_point = 0.0;
    std::vector<Window> window_trace;
    std::vector<WindowResult> rows;
    /// Method-2 points per window.
    std::vector<CrCurve> curves;
};

/// The three shrinking F*F windows; mesh_divisor > 1 coarsens every mesh.
std::vector<Window> default_min_schedule(int mesh_divisor = 1);

/// Method 1 then Method 2 on each window (seeds: every Method-1 point).
MinPointResult find_min_point(CaseSigns s, const std::vector<Window>& schedule, const SweepOptions& opts = {});

}  // namespace tpnls
