#include "sobex/energy.hpp"

#include <algorithm>
#include <cmath>

#include "sobex/parallel.hpp"
#include "sobex/quadrature.hpp"

namespace sobex {

namespace {

constexpr int kOrder = 16;
constexpr double kMaxPanel = 0.25;

double wrap(double x) { return x - std::floor(x / kTwoPi) * kTwoPi; }

/// Sorted cuts of [a, b] from the given interior points, split to panels <= kMaxPanel.
std::vector<double> cuts_of(double a, double b, std::vector<double> pts) {
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double x : pts) {
    if (x < a || x > b) continue;
    if (!out.empty() && x - out.back() < 1e-14) continue;
    if (!out.empty()) {
      double lo = out.back();
      int pieces = static_cast<int>(std::ceil((x - lo) / kMaxPanel));
      for (int k = 1; k < pieces; ++k) out.push_back(lo + (x - lo) * k / pieces);
    }
    out.push_back(x);
  }
  return out;
}

template <typename F>
double panels(const std::vector<double>& cuts, F&& f) {
  const auto& rule = quad::gauss_legendre(kOrder);
  double sum = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double h = 0.5 * (cuts[i + 1] - cuts[i]), m = 0.5 * (cuts[i + 1] + cuts[i]);
    double part = 0;
    for (int k = 0; k < kOrder; ++k) part += rule.weights(k) * f(m + h * rule.nodes(k));
    sum += h * part;
  }
  return sum;
}

/// int_0^2pi dtheta int_band^(2pi - band) F(theta, x) dx, with F smooth except
/// where theta or theta + x crosses a breakpoint.
double band_integral(const std::function<double(double, double)>& F, const std::vector<double>& breaks,
                     double band) {
  std::vector<double> outer_pts;
  for (double b : breaks)
    for (double s : {0.0, band, -band}) outer_pts.push_back(wrap(b + s));
  auto outer = cuts_of(0, kTwoPi, outer_pts);
  const auto& rule = quad::gauss_legendre(kOrder);
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i + 1 < outer.size(); ++i) {
    double h = 0.5 * (outer[i + 1] - outer[i]), m = 0.5 * (outer[i + 1] + outer[i]);
    for (int k = 0; k < kOrder; ++k) {
      nodes.push_back(m + h * rule.nodes(k));
      weights.push_back(h * rule.weights(k));
    }
  }
  std::vector<double> grading;
  for (double g = band; g < kPi; g *= 2) {
    grading.push_back(g);
    grading.push_back(kTwoPi - g);
  }
  return parallel_sum(nodes.size(), [&](std::size_t j) {
    const double th = nodes[j];
    std::vector<double> pts = grading;
    for (double b : breaks) pts.push_back(wrap(b - th));
    auto inner = cuts_of(band, kTwoPi - band, std::move(pts));
    return weights[j] * panels(inner, [&](double x) { return F(th, x); });
  });
}

double band_angle(double eta) { return 2 * std::asin(std::min(1.0, 0.5 * eta)); }

std::string band_protocol(const BandOptions& b) {
  return "diagonal band: chords < " + std::to_string(b.eta_init) + "*2^-l excluded, l = 0.." +
         std::to_string(b.levels - 1) + "; Gauss-" + std::to_string(kOrder) + " panels";
}

void check_band(const BandOptions& b) {
  if (b.levels < 1) throw InvalidArgument("band protocol: levels must be >= 1");
  if (!(b.eta_init > 0 && b.eta_init < 2)) throw InvalidArgument("band protocol: eta_init must lie in (0, 2)");
}

}  // namespace

bool escalates(const std::vector<std::pair<double, double>>& history, double escalation) {
  if (history.size() < 2) return false;
  for (std::size_t i = 1; i < history.size(); ++i)
    if (!(history[i].second >= escalation * history[i - 1].second)) return false;
  return true;
}

void finish_report(EnergyReport& r, double escalation) {
  if (r.history.empty()) return;
  r.value = r.history.back().second;
  r.divergent = escalates(r.history, escalation);
  const double first = r.history.front().second, last = r.history.back().second;
  r.growth_rate = r.history.size() > 1 && first > 0
                      ? std::pow(last / first, 1.0 / (r.history.size() - 1))
                      : 1.0;
}

EnergyReport p_douglas(const Trace& psi, double p, const BandOptions& band) {
  if (!(p >= 2) || !std::isfinite(p)) throw InvalidArgument("p_douglas: p must be >= 2");
  check_band(band);
  EnergyReport r;
  r.p = p;
  r.protocol = band_protocol(band);
  auto F = [&](double th, double x) {
    double num = std::abs(psi.value(th + x) - psi.value(th));
    return std::pow(num / (2 * std::sin(0.5 * x)), p);
  };
  double eta = band.eta_init;
  for (int l = 0; l < band.levels; ++l, eta *= 0.5)
    r.history.emplace_back(1 / eta, band_integral(F, psi.breakpoints, band_angle(eta)));
  finish_report(r, band.escalation);
  return r;
}

EnergyReport p_douglas(const CircleMap& phi, double p, const BandOptions& band) {
  if (!phi.source().is_unit_circle()) throw InvalidArgument("p_douglas: map source must be the unit circle");
  return p_douglas(Trace::from_map(phi), p, band);
}

EnergyReport douglas(const CircleMap& phi, const BandOptions& band) { return p_douglas(phi, 2.0, band); }

EnergyReport inverse_douglas(const CircleMap& phi, const BandOptions& band) {
  if (!phi.target().rectifiable()) throw InvalidArgument("inverse_douglas: target curve is not rectifiable");
  check_band(band);
  const CircleMap inv = invert(phi);
  const double L = phi.target().is_unit_circle() ? kTwoPi : phi.target().length();
  const double scale = (L / kTwoPi) * (L / kTwoPi);
  EnergyReport r;
  r.p = 0;
  r.protocol = band_protocol(band) + " (normalized target parameter)";
  auto F = [&](double t, double x) {
    return std::abs(std::log((inv.evaluate(t + x) - inv.evaluate(t)).norm()));
  };
  auto breaks = inv.breakpoints();
  double eta = band.eta_init;
  for (int l = 0; l < band.levels; ++l, eta *= 0.5)
    r.history.emplace_back(1 / eta, scale * band_integral(F, breaks, band_angle(eta)));
  finish_report(r, band.escalation);
  return r;
}

double sobolev_value(const MeshField& field, double p) {
  if (!(p >= 1) || !std::isfinite(p)) throw InvalidArgument("sobolev_energy: p must be >= 1");
  const TriMesh& m = *field.mesh;
  return parallel_sum(m.element_count(), [&](std::size_t e) {
    return m.areas(e) * std::pow(field.gradients[e].squaredNorm(), 0.5 * p);
  });
}

EnergyReport sobolev_energy(const MeshField& field, double p) {
  return sobolev_energy(std::vector<MeshField>{field}, p);
}

EnergyReport sobolev_energy(const std::vector<MeshField>& fields, double p, double escalation) {
  if (fields.empty()) throw InvalidArgument("sobolev_energy: no fields");
  EnergyReport r;
  r.p = p;
  r.protocol = "Frobenius norm of the element differential, P1 elements";
  for (const auto& f : fields) r.history.emplace_back(f.mesh->level, sobolev_value(f, p));
  finish_report(r, escalation);
  return r;
}

double condition_32_at(const AnalyticMap& g, double p, double omega_angle, double tol) {
  if (!(p >= 1 && p < 2)) throw InvalidArgument("condition_32: p must lie in [1, 2)");
  const Complex omega = std::polar(1.0, omega_angle);
  const double q = 1 / (2 - p);
  // polar coordinates about omega: z = omega + rho e^{i(a + arg(-omega))},
  // rho = R(a) t^q with R = 2 cos a the chord length, which absorbs rho^(1-p)
  auto f = [&](double a, double t) {
    double R = 2 * std::cos(a);
    if (R <= 0 || t <= 0) return 0.0;
    Complex z = omega - omega * std::polar(R * std::pow(t, q), a);
    double w = p == 2 ? 1.0 : std::pow(std::abs(g.derivative(z)), 2 - p);
    return q * std::pow(R, 2 - p) * w;
  };
  return quad::adaptive_2d(f, -kPi / 2, kPi / 2, 0, 1, tol, 200000);
}

double condition_32(const AnalyticMap& g, double p, int omega_count, double tol) {
  if (omega_count < 1) throw InvalidArgument("condition_32: omega_count must be >= 1");
  std::vector<double> values(omega_count);
  parallel_for(omega_count, [&](std::size_t j) { values[j] = condition_32_at(g, p, kTwoPi * j / omega_count, tol); });
  return *std::max_element(values.begin(), values.end());
}

double carleson_box(const std::function<double(Complex)>& weight, double eps, double theta, double tol) {
  if (!(eps > 0 && eps <= 1)) throw InvalidArgument("carleson_box: eps must lie in (0, 1]");
  auto f = [&](double a, double r) { return r * weight(std::polar(r, a)); };
  return quad::adaptive_2d(f, theta - eps, theta, 1 - eps, 1, tol) +
         quad::adaptive_2d(f, theta, theta + eps, 1 - eps, 1, tol);
}

double carleson_constant(const std::function<double(Complex)>& weight, const std::vector<double>& eps_grid,
                         const std::vector<double>& theta_grid, double tol) {
  const std::size_t n = eps_grid.size() * theta_grid.size();
  if (n == 0) throw InvalidArgument("carleson_constant: empty grid");
  std::vector<double> ratio(n);
  parallel_for(n, [&](std::size_t k) {
    double eps = eps_grid[k / theta_grid.size()], th = theta_grid[k % theta_grid.size()];
    ratio[k] = carleson_box(weight, eps, th, tol) / eps;
  });
  return *std::max_element(ratio.begin(), ratio.end());
}

}  // namespace sobex
