#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sobex/boundary_maps.hpp"
#include "sobex/energy.hpp"
#include "sobex/extension.hpp"

namespace sobex {

using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

/// Writes to a sibling temporary file, then renames over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// {"schema_version", "vertices": [[x,y],...], "analytic_tag": string|null};
/// the unit circle is written by tag only.
Json curve_to_json(const JordanCurve& curve);
CurvePtr curve_from_json(const Json& j);

/// {"schema_version", "knots": [[theta,t],...], "source": curve, "target": curve}
Json map_to_json(const CircleMap& f);
CircleMap map_from_json(const Json& j);

/// {"schema_version", "value", "p", "history": [[resolution, value],...],
///  "divergent", "growth_rate", "protocol"}
Json report_to_json(const EnergyReport& r);

/// Shortest round-trip decimal form.
std::string number(double x);

/// node_id,x,y,u,v
std::string field_csv(const MeshField& field);
/// element_id,n0,n1,n2,ux,uy,vx,vy,jacobian
std::string element_csv(const MeshField& field);

/// One closed path element.
std::string curve_svg(const JordanCurve& curve);
/// Image triangles in element order, filled by Jacobian sign.
std::string field_svg(const MeshField& field);

}  // namespace sobex
