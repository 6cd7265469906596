#include <cmath>

#include "cli.hpp"
#include "sobex/conformal.hpp"

namespace sobex::cli {

namespace {

Complex parse_complex(const std::string& s) {
  auto c = s.find(',');
  try {
    if (c == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("expected a complex number 're,im', got '" + s + "'");
  }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

JordanDomain image_of(const AnalyticMap& g) {
  if (g.kind == AnalyticMap::Kind::phi_tau) return make_target_ytau(g.tau);
  return make_unit_disk();
}

}  // namespace

void add_geometry_commands(CLI::App& app) {
  // domain make
  auto* domain = app.add_subcommand("domain", "Jordan domains");
  domain->require_subcommand(1);
  auto* dmake = domain->add_subcommand("make", "write a domain boundary as curve JSON");
  static std::string d_kind = "disk", d_out, d_svg;
  static bool d_self = false;
  dmake->add_option("--kind", d_kind, "disk, square, pentagon, lshape, cusp:<s>, spiral:<n>");
  dmake->add_option("--out", d_out, "curve JSON path (default stdout)");
  dmake->add_option("--svg", d_svg, "SVG path");
  dmake->add_flag("--selftest", d_self);
  dmake->callback([] {
    if (d_self) {
      Selftest t;
      std::string svg = curve_svg(*unit_circle_ptr());
      t.check("unit circle is one closed path", svg.find("<path") == svg.rfind("<path") && svg.find(" Z\"") != std::string::npos);
      auto X = make_cusp_domain(0.5);
      t.check("cusp vertex at the origin", X.domain.boundary().vertices().front().norm() == 0);
      auto sq = make_unit_square();
      t.check("square area 1", std::abs(sq.boundary().signed_area() - 1) < 1e-15);
      auto pent = make_regular_polygon(5);
      t.check("pentagon round trip", curve_from_json(curve_to_json(pent.boundary()))->vertices() == pent.boundary().vertices());
      status() = t.finish();
      return;
    }
    DomainSpec d = parse_domain(d_kind);
    if (!d_svg.empty()) write_atomic(d_svg, curve_svg(d.domain->boundary()));
    emit(d_out, dump(curve_to_json(d.domain->boundary())));
  });

  // map make
  auto* map = app.add_subcommand("map", "boundary maps");
  map->require_subcommand(1);
  auto* mmake = map->add_subcommand("make", "write a boundary map as map JSON");
  static std::string m_kind = "identity", m_domain = "disk", m_out;
  static double m_p = 1.5;
  static bool m_self = false;
  mmake->add_option("--kind", m_kind, "identity, random:<seed>, spiral, cusp[:<slices>], file:<path>");
  mmake->add_option("--domain", m_domain, "source domain");
  mmake->add_option("--p", m_p, "exponent for the cusp map")->check(CLI::Range(1.0, 2.0));
  mmake->add_option("--out", m_out, "map JSON path (default stdout)");
  mmake->add_flag("--selftest", m_self);
  mmake->callback([] {
    if (m_self) {
      Selftest t;
      CircleMap id = CircleMap::identity(unit_circle_ptr());
      t.check("identity fixes angles", std::abs(id.lift(1.234) - 1.234) < 1e-15);
      CircleMap f = random_monotone_map(3, 9, unit_circle_ptr(), unit_circle_ptr());
      bool mono = true;
      for (int i = 1; i <= 10000; ++i) mono = mono && f.lift(kTwoPi * i / 10000) > f.lift(kTwoPi * (i - 1) / 10000);
      t.check("random map strictly increasing on 1e4 samples", mono);
      t.check("random map degree 1", std::abs(f.lift(kTwoPi) - f.lift(0) - kTwoPi) < 1e-12);
      status() = t.finish();
      return;
    }
    DomainSpec d = parse_domain(m_domain);
    emit(m_out, dump(map_to_json(parse_map(m_kind, d.domain->boundary_ptr(), d, d.cusp, m_p))));
  });

  // conformal eval|hardy|koebe
  auto* conf = app.add_subcommand("conformal", "catalog conformal maps");
  conf->require_subcommand(1);
  static std::string c_map = "identity", c_z = "0", c_out;
  static double c_p = 2;
  static std::vector<double> c_r{0.5, 0.9, 0.99};
  static int c_theta = 1024;
  static bool c_self = false;
  auto common = [](CLI::App* s) {
    s->add_option("--map", c_map, "identity, phi_tau:<tau>, moebius:a,b,c,d");
    s->add_option("--out", c_out, "JSON path (default stdout)");
    s->add_flag("--selftest", c_self);
  };
  auto selftest = [] {
    Selftest t;
    AnalyticMap id = AnalyticMap::identity();
    t.check("identity eval", id.eval({0.3, 0.2}) == Complex(0.3, 0.2));
    t.check("identity derivative", id.derivative({0.3, 0.2}) == Complex(1, 0));
    t.check("parse phi_tau", AnalyticMap::parse("phi_tau:0.5").tau == 0.5);
    t.check("Koebe ratio of the identity at 0", std::abs(koebe_ratio(id, make_unit_disk(), 0) - 1) < 1e-6);
    t.check("Hardy norm of the identity", std::abs(hardy_norm([](Complex z) { return z; }, 2, {0.5}, 64) - 0.5) < 1e-14);
    return t.finish();
  };

  auto* eval = conf->add_subcommand("eval", "value and derivative at z");
  common(eval);
  eval->add_option("--z", c_z, "point re,im");
  eval->callback([selftest] {
    if (c_self) {
      status() = selftest();
      return;
    }
    AnalyticMap g = AnalyticMap::parse(c_map);
    Complex z = parse_complex(c_z);
    if (!(std::abs(z) < 1)) throw InvalidArgument("z must lie in the open unit disk");
    Json j{{"schema_version", kSchemaVersion}, {"map", g.name()}, {"z", complex_json(z)},
           {"value", complex_json(g.eval(z))}, {"derivative", complex_json(g.derivative(z))}};
    emit(c_out, dump(j));
  });

  auto* hardy = conf->add_subcommand("hardy", "Hardy H^p norm of the derivative");
  common(hardy);
  hardy->add_option("--p", c_p, "exponent")->check(CLI::PositiveNumber);
  hardy->add_option("--r", c_r, "radii");
  hardy->add_option("--theta", c_theta, "angles per circle")->check(CLI::Range(8, 1 << 20));
  hardy->callback([selftest] {
    if (c_self) {
      status() = selftest();
      return;
    }
    AnalyticMap g = AnalyticMap::parse(c_map);
    double v = hardy_norm([&](Complex z) { return g.derivative(z); }, c_p, c_r, c_theta);
    emit(c_out, dump(Json{{"schema_version", kSchemaVersion}, {"map", g.name()}, {"p", c_p}, {"value", v}}));
  });

  auto* koebe = conf->add_subcommand("koebe", "Koebe distortion ratio at z");
  common(koebe);
  koebe->add_option("--z", c_z, "point re,im");
  koebe->callback([selftest] {
    if (c_self) {
      status() = selftest();
      return;
    }
    AnalyticMap g = AnalyticMap::parse(c_map);
    Complex z = parse_complex(c_z);
    if (!(std::abs(z) < 1)) throw InvalidArgument("z must lie in the open unit disk");
    double v = koebe_ratio(g, image_of(g), z);
    emit(c_out, dump(Json{{"schema_version", kSchemaVersion}, {"map", g.name()}, {"z", complex_json(z)}, {"value", v}}));
  });
}

}  // namespace sobex::cli
