#include <doctest.h>

#include <cmath>
#include <random>

#include "sobex/hyperbolic.hpp"

using namespace sobex;

namespace {

std::shared_ptr<const JordanDomain> disk() { return std::make_shared<const JordanDomain>(make_unit_disk()); }

}  // namespace

TEST_CASE("disk hyperbolic metric") {
  CHECK(disk_hyperbolic(0) == 0);
  CHECK(disk_hyperbolic(0.5) == doctest::Approx(std::log(4.0 / 3)).epsilon(1e-14));
  CHECK_THROWS_AS(disk_hyperbolic(1.0), InvalidArgument);
}

TEST_CASE("quasihyperbolic distance on the disk") {
  auto D = disk();
  QhOptions o;
  o.delta = 1.0 / 128;
  QhGrid g = make_qh_grid(D, Point(0, 0), o);
  CHECK(qh_distance(g, Point(0, 0)) == 0);
  for (int i = 0; i < g.node_count(); ++i) CHECK_MESSAGE(g.boundary_dist[i] > g.spacing[i] / 2, i);
  double d9 = qh_distance(g, Point(0.9, 0));
  // radial integral of 1 / (1 - r)
  CHECK(std::abs(d9 / std::log(10.0) - 1) < 0.03);
  CHECK_THROWS_AS(qh_distance(g, Point(1.5, 0)), InvalidArgument);

  // exact symmetry and triangle inequality on sampled triples
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
  int violations = 0, asym = 0;
  for (int t = 0; t < 6; ++t) {
    int a = pick(rng), b = pick(rng);
    auto da = g.shortest_fixed(a), db = g.shortest_fixed(b);
    asym += da[b] != db[a];
    for (int s = 0; s < 2000; ++s) {
      int c = pick(rng);
      violations += da[c] > da[b] + db[c];
    }
  }
  CHECK(asym == 0);
  CHECK(violations == 0);

  // comparable with the hyperbolic metric
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 100; ++i) {
    Complex z = std::polar(0.6 + 0.35 * U(rng), kTwoPi * U(rng));
    double ratio = qh_distance(g, to_point(z)) / disk_hyperbolic(z);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.5);
  }
}

TEST_CASE("quasihyperbolic distance converges under refinement") {
  auto D = disk();
  double previous = NAN;
  for (double delta : {1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    QhOptions o;
    o.delta = delta;
    double d = qh_distance(make_qh_grid(D, Point(0, 0), o), Point(0.9, 0));
    if (!std::isnan(previous)) CHECK(std::abs(d / previous - 1) < 0.03);
    previous = d;
  }
}

TEST_CASE("approach samples hit the requested distances") {
  auto D = disk();
  auto pts = approach_samples(*D, Point(0, 0), Point(1, 0), {1e-2, 1e-5});
  CHECK(std::abs(D->dist_to_boundary(pts[0]) / 1e-2 - 1) < 1e-6);
  CHECK(std::abs(D->dist_to_boundary(pts[1]) / 1e-5 - 1) < 1e-6);
}

TEST_CASE("growth exponents") {
  std::vector<double> deep, shallow;
  for (int k = 0; k < 8; ++k) deep.push_back(std::pow(10.0, -6 - 4.0 * k / 7));
  for (int k = 0; k < 8; ++k) shallow.push_back(std::pow(10.0, -3 - 2.0 * k / 7));
  auto D = disk();
  GrowthFit fd = growth_exponent(D, Point(0, 0), approach_samples(*D, Point(0, 0), Point(1, 0), deep));
  MESSAGE("disk slope " << fd.slope << " nodes " << fd.grid_nodes);
  CHECK(fd.slope < 0.1);
  CHECK(fd.slope > -0.05);
  for (double s : {0.5, 0.7}) {
    auto X = std::make_shared<const JordanDomain>(make_cusp_domain(s).domain);
    Point x0(0, 0.9);
    GrowthFit f = growth_exponent(X, x0, approach_samples(*X, x0, Point(0, 0), shallow));
    MESSAGE("s = " << s << " slope " << f.slope << " r2 " << f.r2 << " nodes " << f.grid_nodes);
    CHECK(std::abs(f.slope - (1 - s)) < 0.1);
  }
  CHECK_THROWS_AS(growth_exponent(D, Point(0, 0), {Point(0.5, 0)}), InvalidArgument);
}

TEST_CASE("modulus of continuity integral") {
  auto id = [](Complex w) { return w; };
  EnergyReport r = moc_integral(id, 0.3, 0.1, 0.1 / 512);
  // omega(t) = 2t exactly on 64 symmetric samples
  double exact = 2 * (0.01 - std::pow(0.1 / 512, 2));
  CHECK(std::abs(r.value / exact - 1) < 1e-9);
  CHECK(std::abs(r.value / 0.02 - 1) < 0.05);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].second >= r.history[i - 1].second);
  CHECK(!r.divergent);
  // Lipschitz constant at most 4
  auto lip = [](Complex w) { return 3.0 * w + Complex(std::sin(w.real()), 0); };
  EnergyReport rl = moc_integral(lip, 0, 0.1, 0.1 / 512);
  double L = 4;
  CHECK(rl.value <= 2 * L * L * 0.01);
  CHECK(rl.history.back().second / rl.history[rl.history.size() - 2].second < 1.05);
}
