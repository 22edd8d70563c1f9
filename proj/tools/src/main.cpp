#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpnls/boundary.hpp"
#include "tpnls/closedform.hpp"
#include "tpnls/errors.hpp"
#include "tpnls/potential.hpp"
#include "tpnls/profiles.hpp"
#include "tpnls/regions.hpp"
#include "tpnls/stability.hpp"
#include "tpnls_io/io.hpp"

using namespace tpnls;
using io::fmt;
using io::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBoundary = 2, kNoExistence = 3, kNonConvergence = 4, kIo = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CaseSigns case_arg(const std::string& s) {
    const auto c = parse_case(s);
    if (!c) throw UsageError("unknown case '" + s + "' (expected ff, fd, df or dd)");
    return *c;
}

std::vector<double> parse_levels(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad level '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("no levels given");
    return out;
}

JFormula formula_arg(const std::string& s) {
    if (s == "gauge") return JFormula::GaugeForm;
    if (s == "gauge-alt") return JFormula::GaugeFormAlt;
    if (s == "x") return JFormula::XForm;
    if (s == "unit") return JFormula::UnitInterval;
    throw UsageError("unknown formula '" + s + "'");
}

bool wants_json(const std::string& format, const std::string& out) {
    if (format == "json") return true;
    if (format == "csv") return false;
    return out.size() > 5 && out.compare(out.size() - 5, 5, ".json") == 0;
}

// Replaces the extension of path (or appends) with .json.
std::string sidecar_path(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot) + ".json";
    return path + ".json";
}

struct Common {
    std::string out;
    std::string format = "auto";
    int threads = 0;
};

void add_output(CLI::App* sub, Common& c) {
    sub->add_option("-o,--out", c.out, "Output file (stdout when omitted)");
    sub->add_option("--format", c.format, "csv, json or auto (from the --out extension)")
        ->check(CLI::IsMember({"auto", "csv", "json"}));
}

int cmd_classify(const std::string& cs, double omega, double gamma) {
    const ModelParams p{case_arg(cs), omega, gamma};
    if (!(omega > 0.0)) throw UsageError("omega must be positive");
    const ExistenceClass e = classify_existence(p);
    std::cout << "case=" << p.signs.label() << " omega=" << fmt(omega) << " gamma=" << fmt(gamma)
              << " class=" << class_name(e);
    if (const auto* ex = std::get_if<Exists>(&e)) {
        std::cout << " phi0=" << fmt(ex->phi0) << " g_phi0=" << fmt(ex->g_at_phi0)
                  << " interior_zeros=" << interior_zero_count(p).count << '\n';
        return kOk;
    }
    if (const auto* b = std::get_if<BoundaryDoubleZero>(&e)) {
        std::cout << " t=" << fmt(b->t) << '\n';
        return kBoundary;
    }
    std::cout << '\n';
    return kNoExistence;
}

int exit_for_nonexistence(const ModelParams& p) {
    return std::holds_alternative<BoundaryDoubleZero>(classify_existence(p)) ? kBoundary : kNoExistence;
}

int cmd_j(const std::string& cs, double omega, double gamma, const std::string& formula, double rel_tol) {
    if (!(omega > 0.0)) throw UsageError("omega must be positive");
    const ModelParams p{case_arg(cs), omega, gamma};
    QuadOptions q;
    q.formula = formula_arg(formula);
    q.rel_tol = rel_tol;
    try {
        const StabilityValue v = stability_j(p, q);
        std::cout << "J=" << fmt(v.j) << " est_error=" << fmt(v.est_error) << " phi0=" << fmt(v.phi0)
                  << " formula=" << formula_name(v.formula_used) << " interior_zeros=" << v.interior_zeros << '\n';
        return kOk;
    } catch (const NotExistsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_for_nonexistence(p);
    } catch (const QuadratureNonConvergent& e) {
        std::cout << "J=" << fmt(e.partial().j) << " est_error=" << fmt(e.partial().est_error)
                  << " status=nonconvergence\n";
        return kNonConvergence;
    }
}

Window window_args(const std::vector<double>& om, const std::vector<double>& ga, const std::vector<int>& n, bool log) {
    Window w{om.at(0), om.at(1), ga.at(0), ga.at(1), n.at(0), n.at(1), log ? AxisScale::Log : AxisScale::Linear};
    try {
        w.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return w;
}

int cmd_sweep(const std::string& cs, const Window& w, const Common& c) {
    SweepOptions so;
    so.threads = c.threads;
    const ScalarField f = sweep(case_arg(cs), w, so);
    if (wants_json(c.format, c.out)) {
        io::write_text(c.out, io::to_json(f).dump() + "\n");
    } else {
        std::ostringstream os;
        io::write_csv(os, f);
        io::write_text(c.out, os.str());
    }
    return kOk;
}

int cmd_contour(const std::string& in, const std::string& levels, const Common& c) {
    const ScalarField f = io::field_from_json(io::read_json_file(in));
    const std::vector<ParamCurve> curves = extract_level_curves(f, parse_levels(levels));
    if (wants_json(c.format, c.out)) {
        json arr = json::array();
        for (const ParamCurve& pc : curves) arr.push_back(io::to_json(pc));
        io::write_text(c.out, json{{"status", "ok"}, {"curves", std::move(arr)}}.dump() + "\n");
    } else {
        std::ostringstream os;
        io::write_csv(os, curves);
        io::write_text(c.out, os.str());
    }
    return kOk;
}

int cmd_curve_no(const std::string& cs, std::optional<double> t_lo, std::optional<double> t_hi, int n, const Common& c) {
    const CaseSigns s = case_arg(cs);
    const auto range = admissible_t(s);
    if (!range) throw UsageError("the " + s.label() + " case has no non-existence curve");
    const double lo = t_lo.value_or(s == kDD ? range->lo * (1.0 + 1e-6) : 0.003);
    const double hi = t_hi.value_or(s == kFF ? range->hi : 4.0);
    ParamCurve curve;
    try {
        curve = gamma_no_curve(s, lo, hi, n);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (wants_json(c.format, c.out)) {
        io::write_text(c.out, io::to_json(curve).dump() + "\n");
    } else {
        std::ostringstream os;
        io::write_csv(os, std::vector<ParamCurve>{curve});
        io::write_text(c.out, os.str());
    }
    return kOk;
}

int cmd_curve_cr(const std::string& cs, const Window& w, bool refine, const Common& c) {
    const CaseSigns s = case_arg(cs);
    SweepOptions so;
    so.threads = c.threads;
    std::vector<double> omegas;
    for (int i = 0; i < w.n_omega; ++i) omegas.push_back(w.omega_at(i));
    CrCurve cr = trace_gamma_cr(s, omegas, w.gamma_lo, w.gamma_hi, w.n_gamma, so);
    int failures = 0;
    if (refine) {
        RefineOptions ro;
        ro.cell_omega = w.d_omega();
        ro.cell_gamma = w.d_gamma();
        CrCurve refined;
        refined.method = CrMethod::RootRefined;
        refined.d_gamma = cr.d_gamma;
        refined.columns = cr.columns;
        for (const CrPoint& p : cr.points) {
            try {
                const RefineResult r = refine_root(s, p.omega, p.gamma, ro);
                refined.points.push_back({r.omega, r.gamma, true});
            } catch (const Error&) {
                ++failures;
            }
        }
        cr = std::move(refined);
    }
    if (wants_json(c.format, c.out)) {
        json j = io::to_json(cr);
        j["status"] = failures ? "partial" : "ok";
        j["refine_failures"] = failures;
        io::write_text(c.out, j.dump() + "\n");
    } else {
        std::ostringstream os;
        io::write_csv(os, cr);
        io::write_text(c.out, os.str());
    }
    return kOk;
}

int cmd_minpoint(const std::string& cs, int divisor, const Common& c) {
    const CaseSigns s = case_arg(cs);
    if (!(s == kFF)) throw UsageError("minpoint is defined for the ff case");
    if (divisor < 1) throw UsageError("--divisor must be >= 1");
    SweepOptions so;
    so.threads = c.threads;
    MinPointResult m;
    try {
        m = find_min_point(s, default_min_schedule(divisor), so);
    } catch (const NonConvergenceError& e) {
        if (!c.out.empty()) io::write_text(c.out, json{{"status", "nonconvergence"}, {"message", e.what()}}.dump() + "\n");
        std::cerr << "error: " << e.what() << '\n';
        return kNonConvergence;
    }
    if (!c.out.empty()) {
        if (wants_json(c.format, c.out)) {
            io::write_text(c.out, io::to_json(m).dump(2) + "\n");
        } else {
            std::ostringstream os;
            io::write_csv(os, m);
            io::write_text(c.out, os.str());
        }
    }
    for (std::size_t k = 0; k < m.rows.size(); ++k) {
        const WindowResult& r = m.rows[k];
        std::printf("W%zu omega2=%.15g gamma2=%.15g d_omega2=%.5g d_gamma2=%.5g gamma_star=%.15g\n", k + 1, r.omega2,
                    r.gamma2, r.delta_omega2, r.delta_gamma2, r.gamma_star);
    }
    std::printf("omega2=%.15g gamma2=%.15g\n", m.omega2_point, m.gamma2);
    return kOk;
}

struct ProfileArgs {
    std::string method = "bvp";
    double T = 50.0;
    double dt = 0.01;
    double rel_tol = 1e-6;
    double abs_tol = 1e-6;
    std::string stencil;
    std::string boundary = "neumann";
    int phi_samples = 2000;
};

Stencil stencil_arg(const std::string& s, Stencil fallback) {
    if (s.empty()) return fallback;
    if (s == "standard") return Stencil::Standard;
    if (s == "numerov") return Stencil::Numerov;
    throw UsageError("unknown stencil '" + s + "'");
}

int cmd_profile(const std::string& cs, double omega, double gamma, const ProfileArgs& a, const Common& c) {
    if (!(omega > 0.0)) throw UsageError("omega must be positive");
    if (!(a.dt > 0.0) || !(a.T > a.dt)) throw UsageError("need 0 < dt < T");
    const ModelParams p{case_arg(cs), omega, gamma};
    const GeneralCoeffs gc = p.coeffs();
    if (!exists(classify_existence(p))) {
        std::cerr << "error: no standing wave at these parameters\n";
        return exit_for_nonexistence(p);
    }
    const BoundaryMode bm = a.boundary == "dirichlet" ? BoundaryMode::PeakDirichlet : BoundaryMode::PeakNeumann;
    const GridSpec grid{a.T, a.dt, true};
    const std::string sidecar = c.out.empty() ? std::string() : sidecar_path(c.out);
    auto fail = [&](const std::exception& e) {
        if (!sidecar.empty())
            io::write_text(sidecar, json{{"status", "nonconvergence"}, {"method", a.method}, {"message", e.what()}}.dump(2) + "\n");
        std::cerr << "error: " << e.what() << '\n';
        return kNonConvergence;
    };

    ProfileSolution s;
    json extra = json::object();
    try {
        if (a.method == "shoot") {
            const ShootResult raw = shoot(gc, grid.effective_T(), {a.rel_tol, a.abs_tol, 20'000'000});
            s = crop(raw, a.dt);
            extra["stop_time"] = raw.stop_time;
            extra["stop_reason"] = raw.stop_reason == StopReason::StepUnderflow ? "step_underflow" : "time_exhausted";
        } else if (a.method == "quadrature") {
            s = quadrature_profile(gc, grid, a.phi_samples);
        } else if (a.method == "picard") {
            PicardOptions po;
            po.stencil = stencil_arg(a.stencil, po.stencil);
            po.boundary = bm;
            const ProfileSolution u0 = crop(shoot(gc, grid.effective_T(), {a.rel_tol, a.abs_tol, 20'000'000}), a.dt);
            s = picard_solve(gc, u0, a.dt, po);
        } else if (a.method == "bvp") {
            BvpOptions bo;
            bo.stencil = stencil_arg(a.stencil, bo.stencil);
            bo.boundary = bm;
            s = solve_profile(gc, grid, bo);
        } else {
            throw UsageError("unknown method '" + a.method + "'");
        }
    } catch (const NonConvergenceError& e) {
        return fail(e);
    } catch (const SingularOperatorError& e) {
        return fail(e);
    }

    std::ostringstream os;
    io::write_csv(os, s);
    io::write_text(c.out, os.str());
    json meta = io::profile_metadata(s, p.signs, gamma);
    meta.update(extra);
    if (!sidecar.empty()) io::write_text(sidecar, meta.dump(2) + "\n");
    else std::cerr << meta.dump() << '\n';
    return kOk;
}

int cmd_oracle(const std::string& kind, double p, double x, double omega, double beta, double ell, double a, double b) {
    if (kind == "qp") {
        std::cout << "qp=" << fmt(qp(p, x)) << " phi_single=" << fmt(phi_single(p, omega, x)) << '\n';
    } else if (kind == "double-power") {
        const DoublePowerFamily fam{beta, ell};
        fam.validate();
        std::cout << "omega=" << fmt(fam.omega()) << " k=" << fmt(fam.k()) << " lambda=" << fmt(fam.lambda())
                  << " a1=" << fam.a1() << " a2=" << fam.a2() << " phi=" << fmt(double_power_profile(fam, x))
                  << " omega_star=" << fmt(omega_star(beta)) << " domega_dell=" << fmt(domega_dell(beta, ell)) << '\n';
    } else if (kind == "example35") {
        const Example35 e = example35_coeffs(a, b);
        std::cout << "omega=" << fmt(e.omega) << " gamma=" << fmt(e.gamma) << " zeros=" << fmt(e.a) << ','
                  << fmt(e.b) << ',' << fmt(e.x3) << '\n';
    } else if (kind == "endpoints") {
        const BoundaryPoint e = ff_endpoint();
        std::cout << "omega1=" << fmt(e.omega) << " gamma1=" << fmt(e.gamma)
                  << " dd_asymptote=" << fmt(dd_asymptote().gamma) << '\n';
    } else {
        throw UsageError("unknown oracle '" + kind + "'");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Standing waves of the 1D NLS with triple-power nonlinearity"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--threads", common.threads, "Worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);

    std::string cs;
    double omega = 0.0, gamma = 0.0;
    auto point_args = [&](CLI::App* sub) {
        sub->add_option("case", cs, "ff, fd, df or dd")->required();
        sub->add_option("omega", omega)->required();
        sub->add_option("gamma", gamma)->required();
    };

    auto* classify = app.add_subcommand("classify", "Existence class of a parameter point");
    point_args(classify);

    auto* jcmd = app.add_subcommand("j", "Stability functional J");
    point_args(jcmd);
    std::string formula = "gauge";
    double rel_tol = 1e-10;
    jcmd->add_option("--formula", formula, "gauge, gauge-alt, x or unit");
    jcmd->add_option("--rel-tol", rel_tol)->check(CLI::PositiveNumber);

    std::vector<double> om_range{0.001, 1.0}, ga_range{-10.0, 10.0};
    std::vector<int> mesh{50, 50};
    bool log_axis = false;
    auto window_opts = [&](CLI::App* sub) {
        sub->add_option("--omega", om_range, "omega_lo omega_hi")->expected(2);
        sub->add_option("--gamma", ga_range, "gamma_lo gamma_hi")->expected(2);
        sub->add_option("--n", mesh, "n_omega n_gamma")->expected(2);
        sub->add_flag("--log", log_axis, "Log-spaced omega nodes");
    };

    auto* sw = app.add_subcommand("sweep", "Classify a window and evaluate J at every node");
    sw->add_option("case", cs)->required();
    window_opts(sw);
    add_output(sw, common);

    auto* contour = app.add_subcommand("contour", "Level curves of a grid written by sweep");
    std::string in_path, levels = "0";
    contour->add_option("--in", in_path, "Grid JSON")->required();
    contour->add_option("--levels", levels, "Comma-separated levels");
    add_output(contour, common);

    auto* cno = app.add_subcommand("curve-no", "Analytic non-existence curve");
    cno->add_option("case", cs)->required();
    std::optional<double> t_lo, t_hi;
    int n_points = 100;
    cno->add_option("--t-lo", t_lo);
    cno->add_option("--t-hi", t_hi);
    cno->add_option("--n", n_points)->check(CLI::Range(2, 100000000));
    add_output(cno, common);

    auto* ccr = app.add_subcommand("curve-cr", "Stability-change curve by column bracketing");
    ccr->add_option("case", cs)->required();
    window_opts(ccr);
    bool refine = false;
    ccr->add_flag("--refine", refine, "Refine every bracket to a root of J");
    add_output(ccr, common);

    auto* mp = app.add_subcommand("minpoint", "Minimal point of the F*F stability curve over shrinking windows");
    mp->add_option("case", cs)->required();
    int divisor = 1;
    mp->add_option("--divisor", divisor, "Coarsen every window mesh by this factor");
    add_output(mp, common);

    auto* prof = app.add_subcommand("profile", "Standing-wave profile on [0, T]");
    point_args(prof);
    ProfileArgs pa;
    prof->add_option("--method", pa.method)->check(CLI::IsMember({"shoot", "picard", "bvp", "quadrature"}));
    prof->add_option("--T", pa.T);
    prof->add_option("--dt", pa.dt);
    prof->add_option("--rel-tol", pa.rel_tol, "Shooting tolerance")->check(CLI::PositiveNumber);
    prof->add_option("--abs-tol", pa.abs_tol, "Shooting tolerance")->check(CLI::PositiveNumber);
    prof->add_option("--stencil", pa.stencil, "standard or numerov");
    prof->add_option("--boundary", pa.boundary, "neumann or dirichlet at the peak")
        ->check(CLI::IsMember({"neumann", "dirichlet"}));
    prof->add_option("--phi-samples", pa.phi_samples);
    add_output(prof, common);

    auto* orc = app.add_subcommand("oracle", "Closed-form solutions");
    std::string kind;
    double op = 3.0, ox = 0.0, oomega = 1.0, obeta = 1.0, oell = 1.0, oa = 0.2, ob = 0.6;
    orc->add_option("kind", kind, "qp, double-power, example35 or endpoints")->required();
    orc->add_option("--p", op);
    orc->add_option("--x", ox);
    orc->add_option("--omega", oomega);
    orc->add_option("--beta", obeta);
    orc->add_option("--ell", oell);
    orc->add_option("--a", oa);
    orc->add_option("--b", ob);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*classify) return cmd_classify(cs, omega, gamma);
        if (*jcmd) return cmd_j(cs, omega, gamma, formula, rel_tol);
        if (*sw) return cmd_sweep(cs, window_args(om_range, ga_range, mesh, log_axis), common);
        if (*contour) return cmd_contour(in_path, levels, common);
        if (*cno) return cmd_curve_no(cs, t_lo, t_hi, n_points, common);
        if (*ccr) return cmd_curve_cr(cs, window_args(om_range, ga_range, mesh, log_axis), refine, common);
        if (*mp) return cmd_minpoint(cs, divisor, common);
        if (*prof) return cmd_profile(cs, omega, gamma, pa, common);
        if (*orc) return cmd_oracle(kind, op, ox, oomega, obeta, oell, oa, ob);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NotExistsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNoExistence;
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}
