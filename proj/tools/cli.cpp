#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "sobex/counterexamples.hpp"

namespace sobex::cli {

namespace {

std::pair<std::string, std::string> split(const std::string& spec) {
  auto c = spec.find(':');
  if (c == std::string::npos) return {spec, ""};
  return {spec.substr(0, c), spec.substr(c + 1)};
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument(what + ": expected a number, got '" + s + "'");
}

}  // namespace

DomainSpec parse_domain(const std::string& spec) {
  auto [kind, arg] = split(spec);
  DomainSpec d;
  d.name = spec;
  auto hold = [&](JordanDomain dom) { d.domain = std::make_shared<const JordanDomain>(std::move(dom)); };
  if (kind == "disk") {
    hold(make_unit_disk());
  } else if (kind == "square") {
    hold(make_unit_square());
    d.center = Point(0.5, 0.5);
  } else if (kind == "pentagon") {
    hold(make_regular_polygon(5));
  } else if (kind == "lshape") {
    hold(make_l_shape());
    d.center = Point(0.5, 0.5);
  } else if (kind == "cusp") {
    double s = arg.empty() ? 0.5 : to_double(arg, "cusp exponent");
    d.cusp = make_cusp_domain(s);
    hold(d.cusp->domain);
    d.center = Point(0, 0.5);
  } else if (kind == "spiral") {
    int n = arg.empty() ? 8 : static_cast<int>(to_double(arg, "spiral steps"));
    d.spiral = make_spiral_domain(n);
    hold(d.spiral->domain);
  } else {
    throw InvalidArgument("unknown domain '" + spec + "' (disk, square, pentagon, lshape, cusp:<s>, spiral:<n>)");
  }
  return d;
}

MeshBundle make_mesh(const DomainSpec& d, int level) {
  MeshBundle b;
  if (d.cusp) {
    CuspMesh cm = make_cusp_mesh(d.cusp->s, level);
    b.cusp = std::move(cm.cusp);
    b.mesh = std::make_shared<const TriMesh>(std::move(cm.mesh));
  } else if (d.spiral) {
    throw InvalidArgument("no mesh generator for the spiral domain");
  } else if (d.name == "disk") {
    b.mesh = std::make_shared<const TriMesh>(make_disk_mesh(level));
  } else {
    b.mesh = std::make_shared<const TriMesh>(make_polygon_mesh(*d.domain, d.center, level));
  }
  b.boundary = b.mesh->source;
  return b;
}

CircleMap parse_map(const std::string& spec, const CurvePtr& boundary, const DomainSpec& d,
                    const std::optional<CuspDomain>& cusp, double p) {
  auto [kind, arg] = split(spec);
  if (kind == "identity") return CircleMap({{0.0, 0.0}, {kTwoPi, kTwoPi}}, boundary, unit_circle_ptr());
  if (kind == "random") {
    auto seed = static_cast<std::uint64_t>(arg.empty() ? 1 : to_double(arg, "seed"));
    return random_monotone_map(seed, 8, boundary, unit_circle_ptr());
  }
  if (kind == "cusp") {
    if (!cusp) throw InvalidArgument("map 'cusp' needs a cusp domain");
    int slices = arg.empty() ? 20 : static_cast<int>(to_double(arg, "slices"));
    return cusp_boundary_map(*cusp, p, PowerSequence{}, slices);
  }
  if (kind == "spiral") {
    if (!d.spiral) throw InvalidArgument("map 'spiral' needs a spiral domain");
    std::vector<double> sep;
    for (std::size_t k = 1; k <= d.spiral->widths.size(); ++k) sep.push_back(spiral_d(double(k)));
    return spiral_boundary_map(*d.spiral, sep);
  }
  if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw InvalidArgument("cannot read map file '" + arg + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw InvalidArgument(std::string("map file: ") + e.what());
    }
    CircleMap f = map_from_json(j);
    return CircleMap(f.knots(), boundary, f.target_ptr());
  }
  throw InvalidArgument("unknown map '" + spec + "' (identity, random:<seed>, cusp[:<slices>], spiral, file:<path>)");
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_atomic(path, content);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int Selftest::finish() const {
  bool all = true;
  for (const auto& [name, ok] : checks) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    all = all && ok;
  }
  return all ? 0 : 1;
}

}  // namespace sobex::cli
