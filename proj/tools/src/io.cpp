#include "tpnls_io/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace tpnls::io {

namespace {

std::string scale_name(AxisScale s) { return s == AxisScale::Log ? "log" : "linear"; }

AxisScale scale_from(const std::string& s) {
    if (s == "log") return AxisScale::Log;
    if (s == "linear") return AxisScale::Linear;
    throw std::runtime_error("unknown omega_scale '" + s + "'");
}

NodeClass class_from(const std::string& s) {
    if (s == "exists") return NodeClass::Exists;
    if (s == "boundary") return NodeClass::Boundary;
    if (s == "none") return NodeClass::None;
    throw std::runtime_error("unknown node class '" + s + "'");
}

std::string kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::GammaNo: return "gamma_no";
        case CurveKind::GammaCr: return "gamma_cr";
        case CurveKind::LevelSet: return "level_set";
    }
    return "level_set";
}

CurveKind kind_from(const std::string& s) {
    if (s == "gamma_no") return CurveKind::GammaNo;
    if (s == "gamma_cr") return CurveKind::GammaCr;
    return CurveKind::LevelSet;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const Window& w) {
    return {{"omega_lo", w.omega_lo}, {"omega_hi", w.omega_hi}, {"gamma_lo", w.gamma_lo},
            {"gamma_hi", w.gamma_hi}, {"n_omega", w.n_omega},   {"n_gamma", w.n_gamma}};
}

Window window_from_json(const json& j) {
    Window w;
    w.omega_lo = j.at("omega_lo").get<double>();
    w.omega_hi = j.at("omega_hi").get<double>();
    w.gamma_lo = j.at("gamma_lo").get<double>();
    w.gamma_hi = j.at("gamma_hi").get<double>();
    w.n_omega = j.at("n_omega").get<int>();
    w.n_gamma = j.at("n_gamma").get<int>();
    return w;
}

json to_json(const ScalarField& f) {
    json classes = json::array(), values = json::array();
    for (std::size_t k = 0; k < f.j.size(); ++k) {
        classes.push_back(node_class_name(f.cls[k]));
        values.push_back(number(f.j[k]));
    }
    return {{"case", f.signs.short_name()},
            {"window", to_json(f.window)},
            {"omega_scale", scale_name(f.window.omega_scale)},
            {"nodes", {{"class", std::move(classes)}, {"j", std::move(values)}}}};
}

ScalarField field_from_json(const json& j) {
    ScalarField f;
    const auto signs = parse_case(j.at("case").get<std::string>());
    if (!signs) throw std::runtime_error("grid JSON has an unknown case");
    f.signs = *signs;
    f.window = window_from_json(j.at("window"));
    f.window.omega_scale = scale_from(j.value("omega_scale", std::string("linear")));
    f.window.validate();
    const json& cls = j.at("nodes").at("class");
    const json& vals = j.at("nodes").at("j");
    const std::size_t n = std::size_t(f.window.n_omega) * std::size_t(f.window.n_gamma);
    if (cls.size() != n || vals.size() != n) throw std::runtime_error("grid JSON node count does not match the window");
    f.cls.reserve(n);
    f.j.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        f.cls.push_back(class_from(cls[k].get<std::string>()));
        f.j.push_back(vals[k].is_null() ? std::nan("") : vals[k].get<double>());
    }
    return f;
}

json to_json(const ParamCurve& c) {
    json pts = json::array();
    for (const CurvePoint& p : c.points) pts.push_back({p.omega, p.gamma});
    json out = {{"label", c.label()}, {"kind", kind_name(c.kind)}, {"level", c.level},
                {"closed", c.closed}, {"points", std::move(pts)}};
    if (!c.param.empty()) out["t"] = c.param;
    return out;
}

ParamCurve curve_from_json(const json& j) {
    ParamCurve c;
    c.kind = kind_from(j.value("kind", std::string("level_set")));
    c.level = j.value("level", 0.0);
    c.closed = j.value("closed", false);
    for (const json& p : j.at("points")) c.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    if (j.contains("t")) c.param = j.at("t").get<std::vector<double>>();
    return c;
}

json to_json(const CrCurve& c) {
    json pts = json::array(), cols = json::array();
    for (const CrPoint& p : c.points) pts.push_back({p.omega, p.gamma});
    for (const CrColumn& col : c.columns) cols.push_back({{"omega", col.omega}, {"brackets", col.brackets}});
    return {{"label", "gamma_cr"},
            {"method", c.method == CrMethod::RootRefined ? "root_refined" : "mesh_bracket"},
            {"d_gamma", c.d_gamma},
            {"points", std::move(pts)},
            {"columns", std::move(cols)}};
}

json to_json(const MinPointResult& m) {
    json rows = json::array();
    for (const WindowResult& r : m.rows) {
        rows.push_back({{"window", to_json(r.window)},
                        {"gamma_star", r.gamma_star},
                        {"omega_star", {r.omega_star_lo, r.omega_star_hi}},
                        {"columns_with_sign_change", r.columns_with_sign_change},
                        {"columns_non_monotone", r.columns_non_monotone},
                        {"omega2", r.omega2},
                        {"gamma2", r.gamma2},
                        {"refined_points", r.refined_points},
                        {"refine_failures", r.refine_failures},
                        {"delta_omega2", r.delta_omega2},
                        {"delta_gamma2", r.delta_gamma2}});
    }
    return {{"status", "ok"},
            {"omega2", m.omega2_point},
            {"gamma2", m.gamma2},
            {"omega2_interval", {m.omega2_lo, m.omega2_hi}},
            {"windows", std::move(rows)}};
}

void write_csv(std::ostream& os, const ScalarField& f) {
    os << "omega,gamma,class,j\n";
    for (int jg = 0; jg < f.window.n_gamma; ++jg) {
        for (int i = 0; i < f.window.n_omega; ++i) {
            const std::size_t k = f.index(i, jg);
            os << fmt(f.window.omega_at(i)) << ',' << fmt(f.window.gamma_at(jg)) << ',' << node_class_name(f.cls[k])
               << ',' << (f.defined(k) ? fmt(f.j[k]) : "") << '\n';
        }
    }
}

void write_csv(std::ostream& os, const std::vector<ParamCurve>& curves) {
    const bool with_t = !curves.empty() && !curves.front().param.empty();
    os << "curve,omega,gamma" << (with_t ? ",t" : "") << '\n';
    for (std::size_t c = 0; c < curves.size(); ++c) {
        for (std::size_t k = 0; k < curves[c].points.size(); ++k) {
            os << c << ',' << fmt(curves[c].points[k].omega) << ',' << fmt(curves[c].points[k].gamma);
            if (with_t) os << ',' << fmt(curves[c].param[k]);
            os << '\n';
        }
    }
}

void write_csv(std::ostream& os, const CrCurve& c) {
    os << "omega,gamma,refined\n";
    for (const CrPoint& p : c.points) os << fmt(p.omega) << ',' << fmt(p.gamma) << ',' << (p.refined ? 1 : 0) << '\n';
}

void write_csv(std::ostream& os, const MinPointResult& m) {
    os << "window,omega_star_lo,omega_star_hi,gamma_star,omega2,gamma2,delta_omega2,delta_gamma2\n";
    for (std::size_t k = 0; k < m.rows.size(); ++k) {
        const WindowResult& r = m.rows[k];
        os << 'W' << k + 1 << ',' << fmt(r.omega_star_lo) << ',' << fmt(r.omega_star_hi) << ',' << fmt(r.gamma_star)
           << ',' << fmt(r.omega2) << ',' << fmt(r.gamma2) << ',' << fmt(r.delta_omega2) << ','
           << fmt(r.delta_gamma2) << '\n';
    }
}

void write_csv(std::ostream& os, const ProfileSolution& s) {
    os << "t,phi\n";
    for (std::size_t i = 0; i < s.t.size(); ++i) os << fmt(s.t[i]) << ',' << fmt(s.phi[i]) << '\n';
}

json profile_metadata(const ProfileSolution& s, CaseSigns signs, double gamma) {
    return {{"status", "ok"},
            {"method", method_name(s.method)},
            {"case", signs.short_name()},
            {"omega", s.coeffs.omega},
            {"gamma", gamma},
            {"phi0", s.phi0},
            {"dt", s.dt},
            {"T", s.T()},
            {"mass", mass(s)},
            {"energy_residual", number(s.energy_residual)},
            {"bc_residual", number(s.bc_residual)},
            {"iterations", s.iterations},
            {"trace", s.trace}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace tpnls::io
