#include <doctest.h>

#include <cmath>

#include "sobex/conformal.hpp"

using namespace sobex;

TEST_CASE("catalog evaluation") {
  CHECK(AnalyticMap::identity().eval({0.3, 0.4}) == Complex(0.3, 0.4));
  auto phi = AnalyticMap::phi_tau(1.0);
  // at tau = 1 the map is 1/log((1 - z)/3)
  Complex z(0.2, -0.5);
  CHECK(std::abs(phi.eval(z) - 1.0 / std::log((1.0 - z) / 3.0)) < 1e-15);
  double prev = INFINITY;
  for (int j = 1; j <= 8; ++j) {
    double m = std::abs(phi.eval(1 - std::pow(10.0, -j)));
    CHECK(m < prev);
    prev = m;
  }
  CHECK_THROWS_AS(phi.eval(1.0), InvalidArgument);
  CHECK_THROWS_AS(phi.eval({1.1, 0}), InvalidArgument);
  CHECK_THROWS_AS(AnalyticMap::moebius(1, 2, 2, 4), InvalidArgument);
  CHECK(AnalyticMap::parse("phi_tau:0.5").tau == 0.5);
  CHECK(AnalyticMap::parse(AnalyticMap::disk_automorphism({0.1, 0.2}).name()).eval(0.3) ==
        AnalyticMap::disk_automorphism({0.1, 0.2}).eval(0.3));
  CHECK_THROWS_AS(AnalyticMap::parse("phi_tau:x"), InvalidArgument);
}

TEST_CASE("phi_tau is continuous across the real diameter") {
  for (double tau : {0.3, 0.5, 1.0}) {
    auto phi = AnalyticMap::phi_tau(tau);
    for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99})
      CHECK(std::abs(phi.eval({x, 1e-12}) - phi.eval({x, -1e-12})) < 1e-9);
  }
}

TEST_CASE("derivatives match finite differences") {
  auto phi = AnalyticMap::phi_tau(1.0);
  const double h = 1e-6;
  Complex fd = (phi.eval(h) - phi.eval(-h)) / (2 * h);
  CHECK(std::abs(fd - phi.derivative(0.0)) < 1e-6 * std::abs(fd));

  for (const auto& g : {AnalyticMap::phi_tau(0.5), AnalyticMap::phi_tau(1.0),
                        AnalyticMap::disk_automorphism({0.3, -0.2})}) {
    double worst = 0;
    const double e = 1e-5;
    for (int k = 0; k < 1000; ++k) {
      Complex z = halton_disk_point(k, 0.95);
      Complex fx = (g.eval(z + e) - g.eval(z - e)) / (2 * e);
      Complex fy = (g.eval(z + Complex(0, e)) - g.eval(z - Complex(0, e))) / (2 * e);
      // Cauchy-Riemann: f_y = i f_x
      worst = std::max(worst, std::abs(fy - Complex(0, 1) * fx) / std::max(1.0, std::abs(fx)));
      worst = std::max(worst, std::abs(fx - g.derivative(z)) / std::max(1.0, std::abs(fx)));
    }
    CHECK(worst < 1e-8);
    CHECK(univalent_on_sample(g));
  }
}

TEST_CASE("hardy norms") {
  std::vector<double> radii{0.5, 0.9, 0.99};
  CHECK(hardy_norm([](Complex) { return Complex(3, 4); }, 1.5, radii, 64) == doctest::Approx(5.0));
  CHECK(hardy_norm([](Complex z) { return z; }, 2, radii, 64) == doctest::Approx(0.99));
  auto phi = AnalyticMap::phi_tau(1.0);
  auto d = [&](Complex z) { return phi.derivative(z); };
  const int n = 1 << 21;
  double a = hardy_norm(d, 1, {0.999}, n);
  double b = hardy_norm(d, 1, {0.9999}, n);
  MESSAGE("H1 norm of phi' at r=0.999: ", a, ", r=0.9999: ", b);
  CHECK(std::abs(b - a) < 0.01 * b);
  double prev = 0;
  for (double r : {0.2, 0.5, 0.8, 0.95, 0.99}) {
    double v = hardy_norm(d, 1, {r}, 1 << 14);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("Koebe comparability") {
  auto disk = make_unit_disk();
  CHECK(koebe_ratio(AnalyticMap::identity(), disk, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(koebe_ratio(AnalyticMap::identity(), disk, 1.0), InvalidArgument);
  for (double tau : {0.5, 1.0}) {
    auto y = make_target_ytau(tau);
    auto phi = AnalyticMap::phi_tau(tau);
    double lo = INFINITY, hi = 0;
    for (int k = 0; k < 1000; ++k) {
      Complex z = halton_disk_point(k, 0.999);
      double r = koebe_ratio(phi, y, z);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    MESSAGE("tau ", tau, ": Koebe ratio range [", lo, ", ", hi, "]");
    CHECK(lo >= 0.25);
    CHECK(hi <= 4);
  }
}
