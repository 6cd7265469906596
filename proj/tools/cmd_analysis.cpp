#include <cmath>

#include "cli.hpp"
#include "sobex/conformal.hpp"
#include "sobex/energy.hpp"
#include "sobex/extension.hpp"

namespace sobex::cli {

namespace {

Trace disk_trace(const std::string& spec) {
  if (spec.rfind("monomial:", 0) == 0) return Trace::monomial(std::stoi(spec.substr(9)));
  DomainSpec d = parse_domain("disk");
  return Trace::from_map(parse_map(spec, unit_circle_ptr(), d, std::nullopt, 2));
}

double trace_error(const MeshField& f, const CircleMap& phi) {
  Eigen::Matrix2Xd b = boundary_values(*f.mesh, phi);
  double err = 0;
  for (std::size_t i = 0; i < f.mesh->boundary.size(); ++i)
    err = std::max(err, (f.values.col(f.mesh->boundary[i]) - b.col(i)).norm());
  return err;
}

struct ExtendConfig {
  std::string domain = "disk", map = "identity", method = "harmonic", target = "pentagon", inner = "harmonic";
  double p = 2;
  int mesh = 6;
  std::string out, elements, svg, report;
  bool selftest = false;
};

struct ExtendResult {
  MeshField field;
  CircleMap trace;
};

ExtendResult run_extend(const ExtendConfig& c) {
  if (c.method == "composed") {
    if (c.domain != "disk") throw InvalidArgument("composed extension needs --domain disk");
    DomainSpec t = parse_domain(c.target);
    MeshBundle mb = make_mesh(parse_domain("disk"), c.mesh);
    CircleMap phi = parse_map(c.map, unit_circle_ptr(), t, std::nullopt, c.p).retarget(t.domain->boundary_ptr());
    LipschitzTargetMap G(t.domain, t.center);
    auto inner = c.inner == "poisson" ? InnerExtension::poisson : InnerExtension::harmonic;
    return {composed_extension(phi, mb.mesh, G, inner), phi};
  }
  DomainSpec d = parse_domain(c.domain);
  MeshBundle mb = make_mesh(d, c.mesh);
  CircleMap phi = parse_map(c.map, mb.boundary, d, mb.cusp, c.p);
  if (c.method == "harmonic") return {p_harmonic_extend(phi, mb.mesh, 2.0), phi};
  if (c.method == "pharmonic") return {p_harmonic_extend(phi, mb.mesh, c.p), phi};
  throw InvalidArgument("unknown method '" + c.method + "' (harmonic, pharmonic, composed)");
}

}  // namespace

void add_analysis_commands(CLI::App& app) {
  static ExtendConfig ec;
  auto* ext = app.add_subcommand("extend", "extend a boundary map into the domain");
  ext->add_option("--domain", ec.domain, "disk, square, pentagon, lshape, cusp:<s>");
  ext->add_option("--map", ec.map, "identity, random:<seed>, cusp[:<slices>], file:<path>");
  ext->add_option("--method", ec.method, "harmonic, pharmonic, composed");
  ext->add_option("--target", ec.target, "target polygon of the composed method");
  ext->add_option("--inner", ec.inner, "inner disk extension of the composed method: harmonic, poisson");
  ext->add_option("--p", ec.p, "exponent")->check(CLI::Range(1.0, 100.0));
  ext->add_option("--mesh", ec.mesh, "mesh level")->check(CLI::Range(1, 10));
  ext->add_option("--out", ec.out, "field CSV node_id,x,y,u,v (default stdout)");
  ext->add_option("--elements", ec.elements, "element CSV path");
  ext->add_option("--svg", ec.svg, "image triangulation SVG path");
  ext->add_option("--report", ec.report, "summary JSON path");
  ext->add_flag("--selftest", ec.selftest);
  ext->callback([] {
    if (ec.selftest) {
      Selftest t;
      ExtendConfig c;
      c.mesh = 4;
      auto r = run_extend(c);
      t.check("harmonic identity trace error < 1e-6", trace_error(r.field, r.trace) < 1e-6);
      double lin = 0;
      for (Eigen::Index i = 0; i < r.field.values.cols(); ++i)
        lin = std::max(lin, (r.field.values.col(i) - r.field.mesh->nodes.col(i)).norm());
      t.check("harmonic identity is the identity", lin < 1e-10);
      c.method = "composed";
      auto h = homeomorphy_check(run_extend(c).field);
      t.check("composed pentagon extension has positive Jacobians",
              h.jacobian_sign_fraction == 1 && h.injectivity_violations == 0);
      status() = t.finish();
      return;
    }
    if (ec.p <= 1 && ec.method == "pharmonic") throw InvalidArgument("pharmonic needs p > 1");
    auto [field, phi] = run_extend(ec);
    auto h = homeomorphy_check(field);
    Json j{{"schema_version", kSchemaVersion},
           {"domain", ec.method == "composed" ? std::string("disk") : ec.domain},
           {"map", ec.map},
           {"method", ec.method},
           {"p", ec.p},
           {"mesh_level", ec.mesh},
           {"nodes", field.mesh->node_count()},
           {"elements", field.mesh->element_count()},
           {"trace_error", trace_error(field, phi)},
           {"energy", sobolev_value(field, ec.p)},
           {"solver_residual", field.report.residual},
           {"jacobian_sign_fraction", h.jacobian_sign_fraction},
           {"injectivity_violations", h.injectivity_violations}};
    if (ec.method == "composed") j["target"] = ec.target;
    if (!ec.elements.empty()) write_atomic(ec.elements, element_csv(field));
    if (!ec.svg.empty()) write_atomic(ec.svg, field_svg(field));
    if (!ec.report.empty()) write_atomic(ec.report, dump(j));
    emit(ec.out, field_csv(field));
  });

  // energy
  auto* energy = app.add_subcommand("energy", "boundary and interior energies");
  energy->require_subcommand(1);
  static std::string e_map = "identity", e_target = "pentagon", e_weight = "pole", e_out;
  static double e_p = 2, e_eta = 1.0 / 64;
  static int e_levels = 5, e_mesh = 5, e_omegas = 16, e_thetas = 64, e_eps_lo = 3, e_eps_hi = 12;
  static bool e_self = false;
  auto selftest = [] {
    Selftest t;
    double d = douglas(CircleMap::identity(unit_circle_ptr())).value;
    t.check("Douglas energy of the identity is 4 pi^2", std::abs(d / (4 * kPi * kPi) - 1) < 1e-3);
    t.check("kernel weight bound M of the identity at p = 1 is 4",
            std::abs(condition_32(AnalyticMap::identity(), 1.0, 4) - 4) < 1e-6);
    t.check("Carleson box of the unit weight",
            std::abs(carleson_box([](Complex) { return 1.0; }, 0.5, 0) / 0.375 - 1) < 1e-9);
    auto m = std::make_shared<const TriMesh>(make_disk_mesh(5));
    t.check("Dirichlet energy of the identity is 2 pi",
            std::abs(sobolev_value(interpolate(m, [](const Point& x) { return x; }), 2) / kTwoPi - 1) < 1e-3);
    return t.finish();
  };
  auto band = [] {
    BandOptions b;
    b.levels = e_levels;
    b.eta_init = e_eta;
    return b;
  };
  auto add = [&](const char* name, const char* help, auto body) {
    auto* s = energy->add_subcommand(name, help);
    s->add_option("--out", e_out, "report JSON path (default stdout)");
    s->add_flag("--selftest", e_self);
    s->callback([body, selftest] {
      if (e_self) {
        status() = selftest();
        return;
      }
      emit(e_out, dump(report_to_json(body())));
    });
    return s;
  };
  auto band_opts = [](CLI::App* s) {
    s->add_option("--map", e_map, "identity, random:<seed>, monomial:<k>, file:<path>");
    s->add_option("--levels", e_levels, "band refinement levels")->check(CLI::Range(1, 20));
    s->add_option("--eta", e_eta, "initial band chord")->check(CLI::Range(1e-12, 1.0));
  };
  band_opts(add("douglas", "Douglas energy", [band] { return p_douglas(disk_trace(e_map), 2.0, band()); }));
  auto* pd = add("pdouglas", "p-Douglas energy, p >= 2", [band] { return p_douglas(disk_trace(e_map), e_p, band()); });
  band_opts(pd);
  pd->add_option("--p", e_p, "exponent");
  auto* inv = add("invdouglas", "inverse Douglas energy onto a target polygon", [band] {
    DomainSpec t = parse_domain(e_target);
    CircleMap phi = parse_map(e_map, unit_circle_ptr(), t, std::nullopt, 2).retarget(t.domain->boundary_ptr());
    return inverse_douglas(phi, band());
  });
  band_opts(inv);
  inv->add_option("--target", e_target, "target domain");
  auto* sob = add("sobolev", "W^{1,p} energy of the disk extension over mesh levels", [] {
    std::vector<MeshField> fields;
    for (int l = std::max(1, e_mesh - 2); l <= e_mesh; ++l) {
      auto m = std::make_shared<const TriMesh>(make_disk_mesh(l));
      CircleMap phi = parse_map(e_map, unit_circle_ptr(), parse_domain("disk"), std::nullopt, 2);
      fields.push_back(p_harmonic_extend(phi, m, e_p > 1 ? e_p : 2.0));
    }
    return sobolev_energy(fields, e_p);
  });
  sob->add_option("--map", e_map, "identity, random:<seed>, file:<path>");
  sob->add_option("--p", e_p, "exponent (p-harmonic extension for p > 1, harmonic otherwise)")->check(CLI::Range(1.0, 100.0));
  sob->add_option("--mesh", e_mesh, "finest mesh level")->check(CLI::Range(1, 10));
  auto* c32 = add("cond32", "sup over omega of the weighted kernel bound M", [] {
    EnergyReport r;
    r.p = e_p;
    r.protocol = "max over " + std::to_string(e_omegas) + " equispaced omega";
    r.value = condition_32(AnalyticMap::parse(e_map), e_p, e_omegas);
    r.history = {{double(e_omegas), r.value}};
    return r;
  });
  c32->add_option("--map", e_map, "identity, phi_tau:<tau>, moebius:a,b,c,d");
  c32->add_option("--p", e_p, "exponent in [1, 2)");
  c32->add_option("--omegas", e_omegas, "boundary points")->check(CLI::Range(1, 4096));
  auto* car = add("carleson", "Carleson constant sup mu(S_eps) / eps", [] {
    std::function<double(Complex)> w = [](Complex) { return 1.0; };
    if (e_weight == "pole")
      w = [](Complex z) { return 1 / std::abs(1.0 - z); };
    else if (e_weight != "one")
      throw InvalidArgument("unknown weight '" + e_weight + "' (one, pole)");
    std::vector<double> thetas;
    for (int j = 0; j < e_thetas; ++j) thetas.push_back(kTwoPi * j / e_thetas);
    EnergyReport r;
    r.p = 0;
    r.protocol = "boxes eps = 2^-k, k = " + std::to_string(e_eps_lo) + ".." + std::to_string(e_eps_hi) + ", " +
                 std::to_string(e_thetas) + " angles";
    for (int k = e_eps_lo; k <= e_eps_hi; ++k) {
      double eps = std::ldexp(1.0, -k);
      r.history.emplace_back(1 / eps, carleson_constant(w, {eps}, thetas));
    }
    for (const auto& h : r.history) r.value = std::max(r.value, h.second);
    return r;
  });
  car->add_option("--weight", e_weight, "one, pole (1/|1 - z|)");
  car->add_option("--thetas", e_thetas, "box centers")->check(CLI::Range(1, 1 << 16));
  car->add_option("--kmin", e_eps_lo, "largest box 2^-kmin")->check(CLI::Range(0, 40));
  car->add_option("--kmax", e_eps_hi, "smallest box 2^-kmax")->check(CLI::Range(0, 40));
}

}  // namespace sobex::cli
