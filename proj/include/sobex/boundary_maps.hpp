#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "sobex/geometry.hpp"

namespace sobex {

using CurvePtr = std::shared_ptr<const JordanCurve>;

/// Shared polyline unit circle (4096 vertices, analytic evaluation).
CurvePtr unit_circle_ptr();

/// Degree-1 monotone map between two parametrized Jordan curves, stored as the
/// lift theta -> t of constant-speed parameters, linear between knots.
class CircleMap {
 public:
  /// Knots (theta_i, t_i) strictly increasing in both coordinates with
  /// theta_N - theta_0 = t_N - t_0 = 2pi (to 1e-9, then snapped exactly).
  CircleMap(std::vector<std::pair<double, double>> knots, CurvePtr source, CurvePtr target);

  static CircleMap identity(CurvePtr curve);
  /// theta -> theta + alpha on the unit circle.
  static CircleMap rotation(double alpha);
  /// Samples a monotone lift on n equispaced angles.
  static CircleMap sampled(const std::function<double(double)>& lift, int n, CurvePtr source,
                           CurvePtr target);

  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  const JordanCurve& source() const { return *source_; }
  const JordanCurve& target() const { return *target_; }
  CurvePtr source_ptr() const { return source_; }
  CurvePtr target_ptr() const { return target_; }

  /// Lift value t(theta) for any real theta.
  double lift(double theta) const;
  /// Inverse lift theta(t) for any real t.
  double inverse_lift(double t) const;
  /// Slope dt/dtheta (right derivative).
  double slope(double theta) const;
  /// Target point at parameter t(theta).
  Point evaluate(double theta) const { return target_->at_angle(lift(theta)); }
  /// d/dtheta of evaluate, away from breakpoints.
  Point derivative(double theta) const;

  /// Angles in [0, 2pi) where evaluate is not smooth: knots and preimages of
  /// target polyline vertices (none for the analytic circle). Sorted.
  std::vector<double> breakpoints() const;

  /// Same knots with a different target curve (e.g. the unit circle).
  CircleMap retarget(CurvePtr target) const { return CircleMap(knots_, source_, std::move(target)); }

 private:
  std::vector<std::pair<double, double>> knots_;
  CurvePtr source_, target_;
};

inline Point evaluate(const CircleMap& f, double theta) { return f.evaluate(theta); }

/// f after g; requires g.target() to be f.source().
CircleMap compose(const CircleMap& f, const CircleMap& g);
CircleMap invert(const CircleMap& f);

/// Random strictly monotone degree-1 map with `knots` random knots and slopes
/// bounded in [1/max_ratio, max_ratio] relative to the mean.
CircleMap random_monotone_map(std::uint64_t seed, int knots, CurvePtr source, CurvePtr target,
                              double max_ratio = 8.0);

/// Rough trace theta -> 2pi [(1 - mix) x + mix C(x)], x = (theta - phase)/2pi,
/// with C the Cantor function keeping two intervals of relative length
/// `ratio` per generation, resolved to `depth` generations.
CircleMap cantor_map(double ratio, double mix, int depth, double phase = 0);

/// Homeomorphism of the circle with infinite Douglas energy: `steps` equal
/// periods, each rising through its center like
/// sign(u) (1 + log(1/|u|))^(-alpha), blended with (1 - mix) of the rotation;
/// knots graded geometrically toward the centers down to 2^-depth.
CircleMap log_step_map(int steps, double alpha, double mix, int depth = 36);

/// Sum_{j >= k} j^(-a) for a > 1, k >= 1 (Hurwitz zeta), relative error ~1e-15.
double power_tail(double a, double k);

/// Arc data of the spiral construction (angles in radians, 1-based k -> index k-1).
struct SpiralArcs {
  std::vector<double> alpha, beta;  ///< A_k^+ = e^{i[beta_k, alpha_k]}, A_k^- its mirror
};

/// Left side of R_k onto A_k^+, right side onto A_k^-, spiral end (middle of
/// the top of R_N) onto 1, constant speed in between.
CircleMap spiral_boundary_map(const SpiralDomain& domain, const std::vector<double>& d,
                              SpiralArcs* arcs = nullptr);

/// Slice sequence eps_k = k^(-exponent).
struct PowerSequence {
  double exponent = 2.0;
  double operator()(double k) const;
  double tail(double k) const { return power_tail(exponent, k); }
  double total() const { return tail(1); }
};

/// Knot data of the cusp construction; index k = 0..N.
struct CuspArcs {
  std::vector<double> heights;  ///< y_k = tail(k+1)/tail(1)
  std::vector<double> angles;   ///< a_k^+ = e^{i angles[k]}
  std::vector<double> d;        ///< d_k (d[0] unused)
};

/// Graph points at heights y_k map to e^{+-i a_k} with chord 2 sin a_k = d_k,
/// d_k = (log(1+k))^(-1/p); N slices, constant speed below p_N.
CircleMap cusp_boundary_map(const CuspDomain& domain, double p, const PowerSequence& eps,
                            int slices, CuspArcs* arcs = nullptr);
/// Same construction on X_s for any s (no s = p - 1 requirement).
CircleMap cusp_slice_map(const CuspDomain& domain, double p, const PowerSequence& eps, int slices,
                         CuspArcs* arcs = nullptr);

}  // namespace sobex
