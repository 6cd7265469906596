#include <doctest.h>

#include <cmath>

#include "sobex/parallel.hpp"
#include "sobex/quadrature.hpp"
#include "sobex/types.hpp"

using namespace sobex;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const auto& r = quad::gauss_legendre(6);
  for (int k = 0; k <= 11; ++k) {
    double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    double v = quad::integrate([k](double x) { return std::pow(x, k); }, r);
    CHECK(v == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("graded rules resolve endpoint singularities") {
  auto r = quad::graded_toward_left(0.0, 1.0, 80, 10);
  double v = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, r);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  auto b = quad::graded_both(0.0, 1.0, 40, 10);
  double w = quad::integrate([](double x) { return std::log(x * (1 - x)); }, b);
  CHECK(w == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("adaptive_2d handles a corner singularity") {
  // int_0^1 int_0^1 1/sqrt(x^2+y^2) = 2 asinh(1)
  double v = quad::adaptive_2d([](double x, double y) { return 1.0 / std::hypot(x, y); }, 0, 1,
                               0, 1, 1e-9);
  CHECK(v == doctest::Approx(2 * std::asinh(1.0)).epsilon(1e-7));
}

TEST_CASE("parallel_sum is independent of the worker count") {
  auto f = [](std::size_t i) { return std::sin(0.1 * double(i)); };
  double a = parallel_sum(100000, f);
  setenv("SOBEX_THREADS", "1", 1);
  double b = parallel_sum(100000, f);
  unsetenv("SOBEX_THREADS");
  CHECK(a == b);
}
