#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sobex/geometry.hpp"

namespace sobex {

/// Catalog conformal map of the unit disk.
struct AnalyticMap {
  enum class Kind { identity, moebius, phi_tau };
  Kind kind = Kind::identity;
  Complex a{1}, b{0}, c{0}, d{1};  ///< moebius coefficients
  double tau = 1.0;

  static AnalyticMap identity() { return {}; }
  static AnalyticMap moebius(Complex a, Complex b, Complex c, Complex d);
  /// z -> (z - w) / (1 - conj(w) z)
  static AnalyticMap disk_automorphism(Complex w);
  /// -(-log((1 - z)/3))^(-tau); equals log^(-tau)((1 - z)/3) at tau = 1.
  static AnalyticMap phi_tau(double tau);
  /// "identity", "phi_tau:<tau>", "moebius:a,b,c,d" (real) or with 8 numbers
  /// (re,im pairs).
  static AnalyticMap parse(const std::string& spec);
  std::string name() const;

  Complex eval(Complex z) const;
  Complex derivative(Complex z) const;
};

inline Complex eval(const AnalyticMap& g, Complex z) { return g.eval(z); }
inline Complex derivative(const AnalyticMap& g, Complex z) { return g.derivative(z); }

/// max over r in r_grid of (mean over theta_count equispaced angles of
/// |f(r e^{i theta})|^p)^(1/p).
double hardy_norm(const std::function<Complex(Complex)>& f, double p,
                  const std::vector<double>& r_grid, int theta_count);

/// dist(g(z), boundary) / ((1 - |z|) |g'(z)|).
double koebe_ratio(const AnalyticMap& g, const JordanDomain& image, Complex z);

/// True if no two of n Halton points of the disk (radius <= r_max) map within
/// tol of each other.
bool univalent_on_sample(const AnalyticMap& g, int n = 10000, double r_max = 0.999,
                         double tol = 1e-12);

/// Halton sequence point k (bases 2, 3) mapped area-uniformly to the disk of radius r_max.
Complex halton_disk_point(int k, double r_max);

}  // namespace sobex
