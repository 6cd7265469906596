#include <cmath>
#include <sstream>

#include "cli.hpp"
#include "sobex/conformal.hpp"
#include "sobex/counterexamples.hpp"
#include "sobex/hyperbolic.hpp"

namespace sobex::cli {

namespace {

Point parse_point(const std::string& s) {
  auto c = s.find(',');
  try {
    if (c != std::string::npos) return Point(std::stod(s.substr(0, c)), std::stod(s.substr(c + 1)));
  } catch (const std::exception&) {
  }
  throw InvalidArgument("expected a point 'x,y', got '" + s + "'");
}

std::vector<std::int64_t> decades(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 10; k < n; k *= 10) out.push_back(k);
  out.push_back(n);
  return out;
}

}  // namespace

void add_sharpness_commands(CLI::App& app) {
  auto* qh = app.add_subcommand("qh", "quasihyperbolic geometry");
  qh->require_subcommand(1);
  static std::string q_domain = "disk", q_x0 = "0,0", q_toward = "1,0", q_map = "phi_tau:1", q_z = "1,0", q_out,
                     q_csv;
  static std::vector<std::string> q_points{"0.9,0"};
  static double q_delta = 1.0 / 512, q_dmin = 1e-10, q_dmax = 1e-6, q_r = 0.25;
  static int q_samples = 8, q_halvings = 8;
  static bool q_self = false;
  auto selftest = [] {
    Selftest t;
    t.check("disk metric at 1/2", std::abs(disk_hyperbolic(0.5) - std::log(4.0 / 3)) < 1e-15);
    QhOptions o;
    o.delta = 1.0 / 64;
    auto D = std::make_shared<const JordanDomain>(make_unit_disk());
    QhGrid g = make_qh_grid(D, Point(0, 0), o);
    t.check("qh distance to 0.9 within 5% of log 10",
            std::abs(qh_distance(g, Point(0.9, 0)) / std::log(10.0) - 1) < 0.05);
    EnergyReport m = moc_integral([](Complex w) { return w; }, 0, 0.1, 0.1 / 256);
    t.check("moc integral of the identity", std::abs(m.value / 0.02 - 1) < 0.01);
    return t.finish();
  };
  auto common = [](CLI::App* s) {
    s->add_option("--out", q_out, "output path (default stdout)");
    s->add_flag("--selftest", q_self);
  };

  auto* dist = qh->add_subcommand("dist", "quasihyperbolic distances from x0");
  common(dist);
  dist->add_option("--domain", q_domain, "disk, square, pentagon, lshape, cusp:<s>, spiral:<n>");
  dist->add_option("--x0", q_x0, "base point x,y");
  dist->add_option("--x", q_points, "target points x,y");
  dist->add_option("--delta", q_delta, "finest cell size")->check(CLI::Range(1e-6, 0.5));
  dist->callback([selftest] {
    if (q_self) {
      status() = selftest();
      return;
    }
    DomainSpec d = parse_domain(q_domain);
    QhOptions o;
    o.delta = q_delta;
    QhGrid g = make_qh_grid(d.domain, parse_point(q_x0), o);
    std::string csv = "x,y,distance\n";
    for (const auto& s : q_points) {
      Point x = parse_point(s);
      csv += number(x.x()) + ',' + number(x.y()) + ',' + number(qh_distance(g, x)) + '\n';
    }
    emit(q_out, csv);
  });

  auto* growth = qh->add_subcommand("growth", "fit of log h(x0, x) against log 1/dist(x)");
  common(growth);
  growth->add_option("--domain", q_domain, "disk, cusp:<s>, ...");
  growth->add_option("--x0", q_x0, "base point x,y");
  growth->add_option("--toward", q_toward, "boundary point approached along the segment from x0");
  growth->add_option("--dmin", q_dmin, "smallest boundary distance")->check(CLI::PositiveNumber);
  growth->add_option("--dmax", q_dmax, "largest boundary distance")->check(CLI::PositiveNumber);
  growth->add_option("--samples", q_samples, "geometric samples")->check(CLI::Range(4, 64));
  growth->add_option("--csv", q_csv, "sample CSV path");
  growth->callback([selftest] {
    if (q_self) {
      status() = selftest();
      return;
    }
    if (!(q_dmin < q_dmax)) throw InvalidArgument("need dmin < dmax");
    DomainSpec d = parse_domain(q_domain);
    Point x0 = parse_point(q_x0);
    std::vector<double> ds;
    for (int k = 0; k < q_samples; ++k) ds.push_back(q_dmax * std::pow(q_dmin / q_dmax, double(k) / (q_samples - 1)));
    GrowthFit f = growth_exponent(d.domain, x0, approach_samples(*d.domain, x0, parse_point(q_toward), ds));
    Json samples = Json::array();
    std::string csv = "distance_to_boundary,qh_distance\n";
    for (auto [h, dist] : f.samples) {
      samples.push_back({dist, h});
      csv += number(dist) + ',' + number(h) + '\n';
    }
    if (!q_csv.empty()) write_atomic(q_csv, csv);
    emit(q_out, dump(Json{{"schema_version", kSchemaVersion}, {"domain", q_domain}, {"slope", f.slope},
                          {"intercept", f.intercept}, {"r2", f.r2}, {"grid_nodes", f.grid_nodes},
                          {"samples", samples}}));
  });

  auto* moc = qh->add_subcommand("moc", "modulus-of-continuity integral of a catalog map");
  common(moc);
  moc->add_option("--map", q_map, "identity, phi_tau:<tau>, moebius:...");
  moc->add_option("--z", q_z, "center x,y (closed disk)");
  moc->add_option("--r", q_r, "outer radius")->check(CLI::Range(1e-9, 1.0));
  moc->add_option("--halvings", q_halvings, "inner radius halvings")->check(CLI::Range(1, 60));
  moc->callback([selftest] {
    if (q_self) {
      status() = selftest();
      return;
    }
    AnalyticMap g = AnalyticMap::parse(q_map);
    Point z = parse_point(q_z);
    if (z.norm() > 1) throw InvalidArgument("z must lie in the closed unit disk");
    MocOptions o;
    o.halvings = q_halvings;
    o.inside = [](Complex w) { return std::abs(w) <= 1; };
    EnergyReport r = moc_integral([&](Complex w) { return g.eval(w); }, to_complex(z), q_r,
                                  std::ldexp(q_r, -q_halvings), o);
    emit(q_out, dump(report_to_json(r)));
  });

  // cex spiral|cusp
  auto* cex = app.add_subcommand("cex", "sharpness examples: slice lower bounds");
  cex->require_subcommand(1);
  static std::int64_t c_n = 1000000;
  static double c_p = 1.5, c_esc = 1.01;
  static std::string c_out, c_report;
  static bool c_self = false;
  auto cex_selftest = [] {
    Selftest t;
    t.check("spiral N = 1 is 1/log 2", std::abs(spiral_lower_bound(1) - 1 / std::log(2.0)) < 1e-15);
    t.check("cusp N = 1 at p = 1.5",
            std::abs(cusp_lower_bound(1, 1.5) - 6 / (kPi * kPi * std::log(2.0))) < 1e-14);
    t.check("constant bound gives no certificate",
            !divergence_certificate([](std::int64_t) { return 1.0; }, {10, 100, 1000}).certificate);
    return t.finish();
  };
  auto run = [](const std::function<double(std::int64_t)>& bound) {
    auto levels = decades(c_n);
    DivergenceReport r = divergence_certificate(bound, levels, c_esc);
    std::string csv = "N,partial_sum\n";
    for (auto [n, v] : r.table) csv += std::to_string(n) + ',' + number(v) + '\n';
    if (!c_report.empty())
      write_atomic(c_report, dump(Json{{"schema_version", kSchemaVersion}, {"certificate", r.certificate},
                                       {"escalation", r.escalation}, {"loglog_slope", r.slope},
                                       {"loglog_intercept", r.intercept}, {"r2", r.r2}}));
    emit(c_out, csv);
  };
  for (const char* kind : {"spiral", "cusp"}) {
    auto* s = cex->add_subcommand(kind, std::string(kind) + " partial sums per decade up to N");
    s->add_option("--N", c_n, "largest N")->check(CLI::Range(std::int64_t(2), std::int64_t(1) << 40));
    s->add_option("--p", c_p, "exponent in (1, 2)");
    s->add_option("--escalation", c_esc, "certificate growth factor per level")->check(CLI::Range(1.0, 10.0));
    s->add_option("--out", c_out, "CSV path (default stdout)");
    s->add_option("--report", c_report, "certificate JSON path");
    s->add_flag("--selftest", c_self);
    const bool spiral = std::string(kind) == "spiral";
    s->callback([spiral, run, cex_selftest] {
      if (c_self) {
        status() = cex_selftest();
        return;
      }
      if (spiral)
        run([](std::int64_t n) { return spiral_lower_bound(n); });
      else
        run([](std::int64_t n) { return cusp_lower_bound(n, c_p); });
    });
  }
}

}  // namespace sobex::cli
