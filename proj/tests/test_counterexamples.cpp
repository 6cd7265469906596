#include <doctest.h>

#include <cmath>

#include "sobex/counterexamples.hpp"

using namespace sobex;

namespace {

// sequential compensated summation
double kahan(std::int64_t n, const std::function<double(double)>& term) {
  double sum = 0, c = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    double y = term(double(k)) - c, t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::shared_ptr<const TriMesh> unit_square(int level) {
  JordanDomain sq(JordanCurve({Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}), Point(0.5, 0.5));
  return std::make_shared<const TriMesh>(make_polygon_mesh(sq, Point(0.5, 0.5), level));
}

}  // namespace

TEST_CASE("spiral partial sums") {
  CHECK(spiral_lower_bound(1) == doctest::Approx(1 / std::log(2.0)).epsilon(1e-15));
  double a = spiral_lower_bound(1000), b = spiral_lower_bound(1000000);
  auto term = [](double k) { return 1 / (k * std::log1p(k)); };
  CHECK(std::abs(a / kahan(1000, term) - 1) < 1e-13);
  CHECK(std::abs(b / kahan(1000000, term) - 1) < 1e-12);
  CHECK(b / a > 1.1);
  CHECK_THROWS_AS(spiral_lower_bound(0), InvalidArgument);
  double prev = 0;
  for (std::int64_t n = 1; n <= 64; ++n) {
    double v = spiral_lower_bound(n);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("cusp partial sums") {
  CHECK(cusp_lower_bound(1, 1.5) == doctest::Approx(1 / std::log(2.0) * 6 / (kPi * kPi)).epsilon(1e-14));
  // tail of 1/j^2 is comparable to 1/k
  PowerSequence eps;
  for (double k : {1.0, 2.0, 10.0, 1e3, 1e6}) {
    CHECK(k * eps.tail(k) >= 1);
    CHECK(k * eps.tail(k) <= 2);
  }
  // oracle: tails by backward summation from 10^7 plus the integral remainder
  const std::int64_t n = 100000, far = 10000000;
  std::vector<double> tails(n + 2);
  double t = 1.0 / far, c = 0;
  for (std::int64_t j = far - 1; j >= 1; --j) {
    double y = 1.0 / (double(j) * double(j)) - c, s = t + y;
    c = (s - t) - y;
    t = s;
    if (j <= n) tails[j] = t;
  }
  double direct = 0;
  for (std::int64_t k = 1; k <= n; ++k) direct += 1 / std::log1p(double(k)) / (double(k) * double(k)) / tails[k];
  CHECK(std::abs(cusp_lower_bound(n, 1.5) / direct - 1) < 1e-9);
  CHECK(cusp_lower_bound(1000000, 1.5) / cusp_lower_bound(1000, 1.5) > 1.1);
  double prev = 0;
  for (std::int64_t k = 1; k <= 64; ++k) {
    double v = cusp_lower_bound(k, 1.5);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(cusp_lower_bound(10, 2.0), InvalidArgument);
}

TEST_CASE("divergence certificates") {
  std::vector<std::int64_t> levels{1000, 10000, 100000, 1000000};
  auto constant = divergence_certificate([](std::int64_t) { return 3.0; }, levels);
  CHECK(!constant.certificate);
  auto basel = divergence_certificate(
      [](std::int64_t n) { return kahan(n, [](double k) { return 1 / (k * k); }); }, levels);
  CHECK(!basel.certificate);
  auto spiral = divergence_certificate([](std::int64_t n) { return spiral_lower_bound(n); }, levels);
  CHECK(spiral.certificate);
  CHECK(spiral.r2 > 0.95);
  CHECK(spiral.slope > 0.5);
  auto cusp = divergence_certificate([](std::int64_t n) { return cusp_lower_bound(n, 1.5); }, levels);
  CHECK(cusp.certificate);
  CHECK(cusp.r2 > 0.95);
  CHECK_THROWS_AS(divergence_certificate([](std::int64_t) { return 1.0; }, {100, 10}), InvalidArgument);
}

TEST_CASE("cusp slice family") {
  for (double s : {0.5, 0.7}) {
    CuspDomain X = make_cusp_domain(s);
    PowerSequence eps;
    SliceFamily f = cusp_slices(X, s + 1, eps, 100);
    validate(f, X.domain);
    double lo = INFINITY, hi = 0;
    for (std::size_t i = 0; i < f.slices.size(); ++i) {
      const Slice& sl = f.slices[i];
      double k = double(i + 1);
      CHECK(sl.height == eps(k) / eps.total());
      CHECK(sl.d == std::pow(std::log1p(k), -1 / (s + 1)));
      double ratio = sl.width / std::pow(eps.tail(k), 1 / s);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    // single constant C: width <= C tail^(1/s)
    CHECK(hi / lo < 1.01);
  }
}

TEST_CASE("spiral slice family") {
  SpiralDomain sp = make_spiral_domain(8);
  std::vector<double> d;
  for (int k = 1; k <= 8; ++k) d.push_back(spiral_d(k));
  SliceFamily f = spiral_slices(sp, d);
  validate(f, sp.domain);
  for (int k = 1; k <= 8; ++k) {
    CHECK(f.slices[k - 1].height == spiral_h(k));
    CHECK(f.slices[k - 1].width == std::ldexp(1.0, -k));
  }
  SliceFamily bad = f;
  bad.slices[1] = bad.slices[0];
  CHECK_THROWS_AS(validate(bad, sp.domain), InvalidArgument);
}

TEST_CASE("slice energy bounds on the square") {
  auto m = unit_square(4);
  SliceFamily f;
  f.kind = "box";
  f.slices.push_back({0, 1, 0.43, 0.53, 0.1, 1, 0.5});
  for (double p : {1.0, 1.5, 2.0}) {
    auto b = slice_energy_bound(interpolate(m, [](const Point& x) { return x; }), f, p)[0];
    CHECK(std::abs(b.measured / (std::pow(2.0, p / 2) * 0.1) - 1) < 1e-12);
    CHECK(std::abs(b.holder / b.measured - 1) < 1e-12);
    CHECK(b.separation == 0.05);
  }
  MeshField w = interpolate(m, [](const Point& x) { return Point(std::sin(3 * x.x()) + x.y() * x.y(), x.x() * x.y()); });
  f.slices.push_back({0.1, 0.3, 0.0, 0.4, 0.4, 0.2, 0});
  for (double p : {1.2, 1.5, 2.0, 3.0})
    for (const auto& b : slice_energy_bound(w, f, p)) CHECK(b.measured >= b.holder);
  f.slices.push_back({0.5, 1.5, 0.8, 0.9, 0.1, 1, 0});
  CHECK_THROWS_AS(slice_energy_bound(w, f, 1.5), InvalidArgument);
}

TEST_CASE("p-harmonic cusp extension respects the slice bounds") {
  const double p = 1.5;
  CuspMesh cm = make_cusp_mesh(p - 1, 3);
  auto m = std::make_shared<const TriMesh>(cm.mesh);
  CircleMap phi = cusp_boundary_map(cm.cusp, p, PowerSequence{}, 20);
  MeshField h = p_harmonic_extend(phi, m, p);
  SliceFamily f = cusp_slices(cm.cusp, p, PowerSequence{}, 20);
  auto bounds = slice_energy_bound(h, f, p);
  double c = INFINITY;
  PowerSequence eps;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& b = bounds[i];
    CHECK(b.measured >= b.holder);
    CHECK(b.measured >= 0.5 * std::pow(b.separation, p) / std::pow(b.area, p - 1));
    double k = double(i + 1);
    c = std::min(c, b.measured / (std::pow(f.slices[i].d, p) * eps(k) / eps.tail(k)));
  }
  MESSAGE("fitted slice constant " << c);
  CHECK(c > 0);
}

TEST_CASE("FEM energies on the critical and subcritical cusps") {
  FemOptions o;
  o.levels = {1, 2, 3, 4};
  FemEscalation crit = fem_escalation(0.5, 1.5, o), sub = fem_escalation(0.7, 1.5, o);
  const auto &hc = crit.energy.history, &hs = sub.energy.history;
  for (std::size_t i = 1; i < hc.size(); ++i) {
    CHECK(hc[i].second > hc[i - 1].second);
    CHECK(hc[i].second / hc[i - 1].second > hs[i].second / hs[i - 1].second);
  }
  CHECK(sub.stabilizes);
  CHECK(crit.slices == std::vector<int>{8, 16, 32, 64});
}
