#include "sobex/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace sobex {

namespace {

struct View {
  double x0, y0, w, h;
};

View view_of(double xmin, double ymin, double xmax, double ymax) {
  double span = std::max(xmax - xmin, ymax - ymin);
  double pad = 0.05 * (span > 0 ? span : 1);
  return {xmin - pad, ymin - pad, xmax - xmin + 2 * pad, ymax - ymin + 2 * pad};
}

std::string svg_open(const View& v) {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << number(v.x0) << ' ' << number(-(v.y0 + v.h)) << ' '
    << number(v.w) << ' ' << number(v.h) << "\" width=\"800\" height=\"" << number(800 * v.h / v.w) << "\">\n"
    << "<g transform=\"scale(1,-1)\">\n";
  return s.str();
}

constexpr const char* kSvgClose = "</g>\n</svg>\n";

}  // namespace

std::string number(double x) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidArgument("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

Json curve_to_json(const JordanCurve& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["analytic_tag"] = c.analytic_tag() ? Json(*c.analytic_tag()) : Json(nullptr);
  j["rectifiable"] = c.rectifiable();
  if (c.is_unit_circle()) return j;
  Json v = Json::array();
  for (const auto& p : c.vertices()) v.push_back({p.x(), p.y()});
  j["vertices"] = std::move(v);
  return j;
}

CurvePtr curve_from_json(const Json& j) {
  if (j.contains("analytic_tag") && j["analytic_tag"].is_string() && j["analytic_tag"] == "circle")
    return unit_circle_ptr();
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw InvalidArgument("curve JSON: missing vertices");
  std::vector<Point> v;
  for (const auto& p : j["vertices"]) {
    if (!p.is_array() || p.size() != 2) throw InvalidArgument("curve JSON: vertices must be [x, y] pairs");
    v.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  std::optional<std::string> tag;
  if (j.contains("analytic_tag") && j["analytic_tag"].is_string()) tag = j["analytic_tag"].get<std::string>();
  return std::make_shared<const JordanCurve>(std::move(v), tag, j.value("rectifiable", true));
}

Json map_to_json(const CircleMap& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json k = Json::array();
  for (auto [a, b] : f.knots()) k.push_back({a, b});
  j["knots"] = std::move(k);
  j["source"] = curve_to_json(f.source());
  j["target"] = curve_to_json(f.target());
  return j;
}

CircleMap map_from_json(const Json& j) {
  if (!j.contains("knots") || !j.contains("source") || !j.contains("target"))
    throw InvalidArgument("map JSON: need knots, source and target");
  std::vector<std::pair<double, double>> knots;
  for (const auto& k : j["knots"]) {
    if (!k.is_array() || k.size() != 2) throw InvalidArgument("map JSON: knots must be [theta, t] pairs");
    knots.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  return CircleMap(std::move(knots), curve_from_json(j["source"]), curve_from_json(j["target"]));
}

Json report_to_json(const EnergyReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["value"] = r.value;
  j["p"] = r.p;
  Json h = Json::array();
  for (auto [res, v] : r.history) h.push_back({res, v});
  j["history"] = std::move(h);
  j["divergent"] = r.divergent;
  j["growth_rate"] = r.growth_rate;
  j["protocol"] = r.protocol;
  return j;
}

std::string field_csv(const MeshField& f) {
  std::string s = "node_id,x,y,u,v\n";
  const TriMesh& m = *f.mesh;
  for (Eigen::Index i = 0; i < m.node_count(); ++i)
    s += std::to_string(i) + ',' + number(m.nodes(0, i)) + ',' + number(m.nodes(1, i)) + ',' + number(f.values(0, i)) +
         ',' + number(f.values(1, i)) + '\n';
  return s;
}

std::string element_csv(const MeshField& f) {
  std::string s = "element_id,n0,n1,n2,ux,uy,vx,vy,jacobian\n";
  const TriMesh& m = *f.mesh;
  for (Eigen::Index e = 0; e < m.element_count(); ++e) {
    const auto& g = f.gradients[e];
    s += std::to_string(e);
    for (int k = 0; k < 3; ++k) s += ',' + std::to_string(m.tris(k, e));
    s += ',' + number(g(0, 0)) + ',' + number(g(0, 1)) + ',' + number(g(1, 0)) + ',' + number(g(1, 1)) + ',' +
         number(f.jacobian(e)) + '\n';
  }
  return s;
}

std::string curve_svg(const JordanCurve& c) {
  Box b = c.bounding_box();
  std::string s = svg_open(view_of(b.lo.x(), b.lo.y(), b.hi.x(), b.hi.y()));
  s += "<path fill=\"none\" stroke=\"black\" stroke-width=\"0.3%\" vector-effect=\"non-scaling-stroke\" d=\"";
  const auto& v = c.vertices();
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    s += (i == 0 ? "M" : " L") + number(v[i].x()) + ',' + number(v[i].y());
  s += " Z\"/>\n";
  return s + kSvgClose;
}

std::string field_svg(const MeshField& f) {
  const TriMesh& m = *f.mesh;
  Eigen::Vector2d lo = f.values.rowwise().minCoeff(), hi = f.values.rowwise().maxCoeff();
  std::string s = svg_open(view_of(lo.x(), lo.y(), hi.x(), hi.y()));
  for (Eigen::Index e = 0; e < m.element_count(); ++e) {
    double J = f.jacobian(e);
    const char* fill = J > 0 ? "#4c9f70" : (J < 0 ? "#d1495b" : "#999999");
    s += "<polygon fill=\"";
    s += fill;
    s += "\" stroke=\"black\" stroke-width=\"0.5\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (int k = 0; k < 3; ++k) {
      int n = m.tris(k, e);
      s += (k ? " " : "") + number(f.values(0, n)) + ',' + number(f.values(1, n));
    }
    s += "\"/>\n";
  }
  return s + kSvgClose;
}

}  // namespace sobex
