#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "tpnls/boundary.hpp"
#include "tpnls/profiles.hpp"
#include "tpnls/regions.hpp"

namespace tpnls::io {

using nlohmann::json;

/// %.17g, or "nan"/"inf" spelled out for non-finite values.
std::string fmt(double v);

json to_json(const Window& w);
Window window_from_json(const json& j);

/// { case, window, omega_scale, nodes: { class: [...], j: [... null ...] } }
json to_json(const ScalarField& f);
ScalarField field_from_json(const json& j);

/// { label, kind, level, closed, points: [[omega, gamma], ...], t: [...] }
json to_json(const ParamCurve& c);
ParamCurve curve_from_json(const json& j);

json to_json(const CrCurve& c);
json to_json(const MinPointResult& m);

/// omega,gamma,class,j with an empty j where undefined.
void write_csv(std::ostream& os, const ScalarField& f);
/// curve,omega,gamma[,t]; curve is the polyline index.
void write_csv(std::ostream& os, const std::vector<ParamCurve>& curves);
/// omega,gamma,refined
void write_csv(std::ostream& os, const CrCurve& c);
/// window,omega_star_lo,omega_star_hi,gamma_star,omega2,gamma2,delta_omega2,delta_gamma2
void write_csv(std::ostream& os, const MinPointResult& m);
/// t,phi
void write_csv(std::ostream& os, const ProfileSolution& s);

json profile_metadata(const ProfileSolution& s, CaseSigns signs, double gamma);

json read_json_file(const std::string& path);
/// Writes text to path, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace tpnls::io
