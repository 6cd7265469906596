#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sobex/counterexamples.hpp"
#include "sobex/conformal.hpp"
#include "sobex/energy.hpp"
#include "sobex/extension.hpp"
#include "sobex/hyperbolic.hpp"

using namespace sobex;

namespace {

// criterion 1
constexpr double kDouglasRel = 1e-3;
constexpr double kDouglasSeconds = 10;
// criterion 2
constexpr double kCarlesonBound = 4 * kPi;
constexpr double kCarlesonSeconds = 30;
// criterion 3
constexpr double kPoissonSup = 1e-5;
constexpr double kPoissonRadius = 0.95;
constexpr double kDerivativeRel = 1e-4;
// criterion 4
constexpr int kPentagonLevel = 5;
constexpr int kPentagonTraces = 10;
// criterion 5
constexpr double kStableChange = 0.05;
constexpr double kEscalation = 1.10;
constexpr int kEscalationSteps = 4;
// criterion 6
constexpr double kQhRel = 0.03;
constexpr double kQhDelta = 1.0 / 512;
constexpr double kQhSeconds = 60;
// criterion 7
constexpr double kSlopeTol = 0.1;
constexpr double kDiskSlope = 0.1;
// criterion 8
constexpr double kLogLogR2 = 0.95;
constexpr double kSharpnessSeconds = 600;
// criterion 9
constexpr int kHalvings = 8;
constexpr double kMocGrowth = 1.05;
// criterion 10
constexpr double kMedianFactor = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion1() {
  auto path = std::filesystem::temp_directory_path() / "sobex_acceptance_douglas.json";
  auto t0 = Clock::now();
  std::string cmd = std::string(SOBEX_CLI) + " energy douglas --map identity --levels 5 --out " + path.string();
  int rc = std::system(cmd.c_str());
  double t = seconds_since(t0);
  double value = NAN;
  if (WIFEXITED(rc) && WEXITSTATUS(rc) == 0) {
    std::ifstream in(path);
    value = nlohmann::json::parse(in)["value"].get<double>();
  }
  std::filesystem::remove(path);
  double rel = std::abs(value / (4 * kPi * kPi) - 1);
  report(1, rel < kDouglasRel && t < kDouglasSeconds, fmt("douglas(identity) = %.6f, rel err %.2e, %.2f s", value, rel, t));
}

void criterion2() {
  auto t0 = Clock::now();
  std::vector<double> eps, th;
  for (int k = 3; k <= 12; ++k) eps.push_back(std::ldexp(1.0, -k));
  for (int j = 0; j < 64; ++j) th.push_back(kTwoPi * j / 64);
  double C = carleson_constant([](Complex z) { return 1 / std::abs(1.0 - z); }, eps, th);
  double t = seconds_since(t0);
  report(2, C <= kCarlesonBound && t < kCarlesonSeconds, fmt("carleson constant %.6f <= 4pi = %.6f, %.2f s", C, kCarlesonBound, t));
}

void criterion3() {
  double sup = 0;
  for (int k = 1; k <= 3; ++k) {
    Trace psi = Trace::monomial(k);
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j < 128; ++j) {
        Complex z = std::polar(kPoissonRadius * i / 40, kTwoPi * j / 128);
        sup = std::max(sup, std::abs(poisson_extend(psi, z) - std::pow(z, k)));
      }
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0, 1);
  CircleMap f = random_monotone_map(11, 9, unit_circle_ptr(), unit_circle_ptr());
  Trace psi = Trace::from_map(f);
  double worst = 0;
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    Complex z = std::polar(kPoissonRadius * std::sqrt(U(rng)), kTwoPi * U(rng));
    auto [hz, hzb] = poisson_derivative(psi, z);
    Complex dx = (poisson_extend(psi, z + h) - poisson_extend(psi, z - h)) / (2 * h);
    Complex dy = (poisson_extend(psi, z + Complex(0, h)) - poisson_extend(psi, z - Complex(0, h))) / (2 * h);
    Complex ax = hz + hzb, ay = Complex(0, 1) * (hz - hzb);
    double scale = std::hypot(std::abs(ax), std::abs(ay));
    worst = std::max(worst, std::hypot(std::abs(ax - dx), std::abs(ay - dy)) / scale);
  }
  report(3, sup < kPoissonSup && worst < kDerivativeRel,
         fmt("sup |P[e^{ik}] - z^k| = %.2e on |z| <= 0.95, derivative vs FD rel %.2e", sup, worst));
}

void criterion4() {
  auto pent = std::make_shared<const JordanDomain>(make_regular_polygon(5));
  LipschitzTargetMap G(pent, Point(0, 0));
  auto mesh = std::make_shared<const TriMesh>(make_disk_mesh(kPentagonLevel));
  double worst = 1;
  std::size_t crossings = 0;
  for (int seed = 1; seed <= kPentagonTraces; ++seed) {
    CircleMap phi = random_monotone_map(seed, 8, unit_circle_ptr(), pent->boundary_ptr());
    auto h = homeomorphy_check(composed_extension(phi, mesh, G));
    worst = std::min(worst, h.jacobian_sign_fraction);
    crossings += h.injectivity_violations;
  }
  report(4, worst == 1.0,
         fmt("min positive-Jacobian fraction %.6f over %d traces at level %d (%zu edge crossings)", worst,
             kPentagonTraces, kPentagonLevel, crossings));
}

std::vector<double> disk_energies(const CircleMap& f, double p, int l0, int l1) {
  std::vector<double> e;
  for (int l = l0; l <= l1; ++l) {
    auto m = std::make_shared<const TriMesh>(make_disk_mesh(l));
    e.push_back(sobolev_value(p_harmonic_extend(f, m, 2.0), p));
  }
  return e;
}

void criterion5() {
  const std::vector<std::pair<double, double>> cantor{{1.0 / 3, 0.5}, {0.2, 0.9}, {0.4, 0.95}, {0.3, 0.8}, {0.25, 0.7}};
  double worst_change = 0;
  for (std::size_t i = 0; i < cantor.size(); ++i) {
    auto e = disk_energies(cantor_map(cantor[i].first, cantor[i].second, 12, 0.1 * (i + 1)), 1.5, 4, 7);
    worst_change = std::max(worst_change, std::abs(e.back() / e[e.size() - 2] - 1));
  }
  auto e = disk_energies(log_step_map(3, 0.05, 0.95), 2.0, 2, 2 + kEscalationSteps);
  double min_growth = INFINITY;
  for (std::size_t i = 1; i < e.size(); ++i) min_growth = std::min(min_growth, e[i] / e[i - 1]);
  report(5, worst_change < kStableChange && min_growth >= kEscalation,
         fmt("Cantor traces p = 1.5: max last change %.2f%%; log-step trace p = 2: min growth %.1f%% over %d levels",
             100 * worst_change, 100 * (min_growth - 1), kEscalationSteps));
}

void criterion6() {
  auto t0 = Clock::now();
  auto D = std::make_shared<const JordanDomain>(make_unit_disk());
  QhOptions o;
  o.delta = kQhDelta;
  QhGrid g = make_qh_grid(D, Point(0, 0), o);
  double d = qh_distance(g, Point(0.9, 0));
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
  int violations = 0, triples = 0;
  for (int t = 0; t < 4; ++t) {
    int a = pick(rng), b = pick(rng);
    auto da = g.shortest_fixed(a), db = g.shortest_fixed(b);
    for (int s = 0; s < 5000; ++s, ++triples) {
      int c = pick(rng);
      violations += da[c] > da[b] + db[c];
    }
  }
  double t = seconds_since(t0);
  double rel = std::abs(d / std::log(10.0) - 1);
  report(6, rel < kQhRel && violations == 0 && t < kQhSeconds,
         fmt("qh(0, 0.9) = %.5f vs log 10 (rel %.2f%%), %d/%d triangle violations, %d nodes, %.1f s", d, 100 * rel,
             violations, triples, g.node_count(), t));
}

void criterion7() {
  std::vector<double> deep, shallow;
  for (int k = 0; k < 8; ++k) deep.push_back(std::pow(10.0, -6 - 4.0 * k / 7));
  for (int k = 0; k < 8; ++k) shallow.push_back(std::pow(10.0, -3 - 2.0 * k / 7));
  auto D = std::make_shared<const JordanDomain>(make_unit_disk());
  double disk = growth_exponent(D, Point(0, 0), approach_samples(*D, Point(0, 0), Point(1, 0), deep)).slope;
  bool ok = disk < kDiskSlope;
  std::string detail = fmt("disk slope %.3f", disk);
  for (double s : {0.3, 0.5, 0.7}) {
    auto X = std::make_shared<const JordanDomain>(make_cusp_domain(s).domain);
    Point x0(0, 0.9);
    double slope = growth_exponent(X, x0, approach_samples(*X, x0, Point(0, 0), shallow)).slope;
    ok = ok && std::abs(slope - (1 - s)) <= kSlopeTol;
    detail += fmt("; s = %.1f slope %.3f (target %.1f)", s, slope, 1 - s);
  }
  report(7, ok, detail);
}

void criterion8() {
  auto t0 = Clock::now();
  std::vector<std::int64_t> levels{1000, 10000, 100000, 1000000};
  auto sp = divergence_certificate([](std::int64_t n) { return spiral_lower_bound(n); }, levels);
  auto cu = divergence_certificate([](std::int64_t n) { return cusp_lower_bound(n, 1.5); }, levels);
  FemEscalation crit = fem_escalation(0.5, 1.5), sub = fem_escalation(0.7, 1.5);
  double t = seconds_since(t0);
  std::string growth;
  const auto& h = crit.energy.history;
  for (std::size_t i = 1; i < h.size(); ++i) growth += fmt("%s%.1f%%", i > 1 ? "," : "", 100 * (h[i].second / h[i - 1].second - 1));
  const auto& hs = sub.energy.history;
  double last = std::abs(hs.back().second / hs[hs.size() - 2].second - 1);
  bool ok = sp.certificate && cu.certificate && sp.r2 > kLogLogR2 && cu.r2 > kLogLogR2 && crit.escalates &&
            sub.stabilizes && t < kSharpnessSeconds;
  report(8, ok,
         fmt("certificates spiral %d (r2 %.4f) cusp %d (r2 %.4f); FEM s = 0.5 growth per level [%s] needs >= 10%%; "
             "s = 0.7 last change %.2f%%; %.0f s",
             sp.certificate, sp.r2, cu.certificate, cu.r2, growth.c_str(), 100 * last, t));
}

void criterion9() {
  AnalyticMap phi = AnalyticMap::phi_tau(1.0);
  MocOptions o;
  o.halvings = kHalvings;
  o.escalation = kMocGrowth;
  o.inside = [](Complex w) { return std::abs(w) <= 1; };
  const double r = 0.25;
  EnergyReport m = moc_integral([&](Complex w) { return phi.eval(w); }, 1.0, r, std::ldexp(r, -kHalvings), o);
  bool monotone = true;
  double min_growth = INFINITY;
  for (std::size_t i = 1; i < m.history.size(); ++i) {
    monotone = monotone && m.history[i].second > m.history[i - 1].second;
    min_growth = std::min(min_growth, m.history[i].second / m.history[i - 1].second);
  }
  const double L = 4;
  auto lip = [](Complex w) { return 3.0 * w + Complex(std::sin(w.real()), 0); };
  EnergyReport ml = moc_integral(lip, 1.0, r, std::ldexp(r, -kHalvings), o);
  const double bound = 2 * L * L * r * r;
  double lip_last = ml.history.back().second / ml.history[ml.history.size() - 2].second - 1;
  bool ok = monotone && m.divergent && !ml.divergent && ml.value <= bound && lip_last < kMocGrowth - 1;
  report(9, ok,
         fmt("Phi_1 at z = 1: monotone %d, min growth per halving %.2f%% (needs >= 5%%); Lipschitz: %.4f <= %.4f, "
             "last change %.2f%%",
             monotone, 100 * (min_growth - 1), ml.value, bound, 100 * lip_last));
}

void criterion10() {
  std::vector<double> ratios;
  auto mesh = std::make_shared<const TriMesh>(make_disk_mesh(6));
  std::vector<MeshField> fields;
  for (int seed = 1; seed <= 20; ++seed)
    fields.push_back(p_harmonic_extend(random_monotone_map(100 + seed, 8, unit_circle_ptr(), unit_circle_ptr()), mesh, 2.0));
  for (double p : {1.0, 1.5}) {
    double M = condition_32(AnalyticMap::identity(), p, 16);
    for (const auto& f : fields) ratios.push_back(std::pow(sobolev_value(f, p), 1 / p) / (M * kTwoPi));
  }
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  double median = 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
  report(10, sorted.back() <= kMedianFactor * median,
         fmt("ratio range [%.4f, %.4f], median %.4f, max/median %.2f over %zu runs", sorted.front(), sorted.back(), median,
             sorted.back() / median, ratios.size()));
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed, %.0f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
