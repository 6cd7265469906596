#include "sobex/boundary_maps.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sobex {

namespace {

constexpr double kKnotTol = 1e-9;

double interp(const std::vector<std::pair<double, double>>& k, double x, bool forward) {
  auto key = [forward](const std::pair<double, double>& p) { return forward ? p.first : p.second; };
  auto val = [forward](const std::pair<double, double>& p) { return forward ? p.second : p.first; };
  auto it = std::upper_bound(k.begin(), k.end(), x,
                             [&](double v, const std::pair<double, double>& p) { return v < key(p); });
  std::size_t i = std::clamp<std::ptrdiff_t>(it - k.begin() - 1, 0, std::ptrdiff_t(k.size()) - 2);
  double x0 = key(k[i]), x1 = key(k[i + 1]);
  double w = (x - x0) / (x1 - x0);
  return val(k[i]) + w * (val(k[i + 1]) - val(k[i]));
}

bool same_curve(const JordanCurve& a, const JordanCurve& b) {
  if (&a == &b) return true;
  if (a.is_unit_circle() && b.is_unit_circle()) return true;
  return a.vertices() == b.vertices();
}

}  // namespace

CurvePtr unit_circle_ptr() {
  static const CurvePtr circle = std::make_shared<const JordanCurve>(make_unit_circle(4096));
  return circle;
}

CircleMap::CircleMap(std::vector<std::pair<double, double>> knots, CurvePtr source, CurvePtr target)
    : knots_(std::move(knots)), source_(std::move(source)), target_(std::move(target)) {
  if (!source_ || !target_) throw InvalidArgument("CircleMap: missing curve");
  if (knots_.size() < 2) throw InvalidArgument("CircleMap: fewer than 2 knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second))
      throw InvalidArgument("CircleMap: non-finite knot");
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first && knots_[i].second > knots_[i - 1].second))
      throw InvalidArgument("CircleMap: knots not strictly increasing at index " + std::to_string(i));
  }
  auto& last = knots_.back();
  const auto& first = knots_.front();
  if (std::abs(last.first - first.first - kTwoPi) > kKnotTol ||
      std::abs(last.second - first.second - kTwoPi) > kKnotTol)
    throw InvalidArgument("CircleMap: knot table must span exactly one turn (degree 1)");
  last.first = first.first + kTwoPi;
  last.second = first.second + kTwoPi;
}

CircleMap CircleMap::identity(CurvePtr curve) {
  return CircleMap({{0.0, 0.0}, {kTwoPi, kTwoPi}}, curve, curve);
}

CircleMap CircleMap::rotation(double alpha) {
  return CircleMap({{0.0, alpha}, {kTwoPi, alpha + kTwoPi}}, unit_circle_ptr(), unit_circle_ptr());
}

CircleMap CircleMap::sampled(const std::function<double(double)>& lift, int n, CurvePtr source,
                             CurvePtr target) {
  if (n < 2) throw InvalidArgument("CircleMap::sampled: n < 2");
  std::vector<std::pair<double, double>> k(n + 1);
  for (int j = 0; j < n; ++j) {
    double th = kTwoPi * j / n;
    k[j] = {th, lift(th)};
  }
  k[n] = {kTwoPi, k[0].second + kTwoPi};
  return CircleMap(std::move(k), std::move(source), std::move(target));
}

double CircleMap::lift(double theta) const {
  double th0 = knots_.front().first;
  double turns = std::floor((theta - th0) / kTwoPi);
  double local = theta - turns * kTwoPi;
  return interp(knots_, local, true) + turns * kTwoPi;
}

double CircleMap::inverse_lift(double t) const {
  double t0 = knots_.front().second;
  double turns = std::floor((t - t0) / kTwoPi);
  double local = t - turns * kTwoPi;
  return interp(knots_, local, false) + turns * kTwoPi;
}

double CircleMap::slope(double theta) const {
  double th0 = knots_.front().first;
  double local = theta - std::floor((theta - th0) / kTwoPi) * kTwoPi;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), local,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  std::size_t i = std::clamp<std::ptrdiff_t>(it - knots_.begin() - 1, 0,
                                             std::ptrdiff_t(knots_.size()) - 2);
  return (knots_[i + 1].second - knots_[i].second) / (knots_[i + 1].first - knots_[i].first);
}

Point CircleMap::derivative(double theta) const {
  return target_->tangent_at_angle(lift(theta)) * slope(theta);
}

std::vector<double> CircleMap::breakpoints() const {
  std::vector<double> out;
  auto wrap = [](double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0 ? x + kTwoPi : x;
  };
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) out.push_back(wrap(knots_[i].first));
  if (!target_->is_unit_circle()) {
    const auto& cum = target_->cumulative_arclength();
    double L = target_->length();
    for (std::size_t j = 0; j + 1 < cum.size(); ++j) out.push_back(wrap(inverse_lift(kTwoPi * cum[j] / L)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            out.end());
  return out;
}

CircleMap compose(const CircleMap& f, const CircleMap& g) {
  if (!same_curve(g.target(), f.source()))
    throw InvalidArgument("compose: target of the inner map is not the source of the outer map");
  const double th0 = g.knots().front().first;
  const double t0 = g.knots().front().second;
  std::vector<double> thetas;
  for (const auto& k : g.knots()) thetas.push_back(k.first);
  // preimages under g of f's knots, shifted into [t0, t0 + 2pi)
  for (const auto& k : f.knots()) {
    double u = k.first;
    u -= std::floor((u - t0) / kTwoPi) * kTwoPi;
    thetas.push_back(g.inverse_lift(u));
  }
  std::sort(thetas.begin(), thetas.end());
  std::vector<std::pair<double, double>> knots;
  for (double th : thetas) {
    if (th < th0 || th > th0 + kTwoPi) continue;
    if (!knots.empty() && th - knots.back().first < 1e-14) continue;
    knots.emplace_back(th, f.lift(g.lift(th)));
  }
  if (knots.back().first < th0 + kTwoPi - 1e-14)
    knots.emplace_back(th0 + kTwoPi, knots.front().second + kTwoPi);
  knots.back() = {th0 + kTwoPi, knots.front().second + kTwoPi};
  return CircleMap(std::move(knots), g.source_ptr(), f.target_ptr());
}

CircleMap invert(const CircleMap& f) {
  std::vector<std::pair<double, double>> k;
  k.reserve(f.knots().size());
  for (const auto& [a, b] : f.knots()) k.emplace_back(b, a);
  return CircleMap(std::move(k), f.target_ptr(), f.source_ptr());
}

CircleMap random_monotone_map(std::uint64_t seed, int knots, CurvePtr source, CurvePtr target,
                              double max_ratio) {
  if (knots < 1 || !(max_ratio >= 1)) throw InvalidArgument("random_monotone_map: bad parameters");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> width(1.0);
  std::uniform_real_distribution<double> logslope(-0.5 * std::log(max_ratio), 0.5 * std::log(max_ratio));
  std::uniform_real_distribution<double> offset(0, kTwoPi);
  std::vector<double> dth(knots), dt(knots);
  double sth = 0, st = 0;
  for (int i = 0; i < knots; ++i) {
    dth[i] = 0.2 + width(rng);
    sth += dth[i];
  }
  for (int i = 0; i < knots; ++i) {
    dth[i] *= kTwoPi / sth;
    dt[i] = dth[i] * std::exp(logslope(rng));
    st += dt[i];
  }
  std::vector<std::pair<double, double>> k{{0.0, offset(rng)}};
  for (int i = 0; i < knots; ++i)
    k.emplace_back(k.back().first + dth[i], k.back().second + dt[i] * kTwoPi / st);
  return CircleMap(std::move(k), std::move(source), std::move(target));
}

double power_tail(double a, double k) {
  if (!(a > 1) || !(k >= 1)) throw InvalidArgument("power_tail: need a > 1 and k >= 1");
  constexpr int M = 12;
  double s = 0;
  for (int j = 0; j < M; ++j) s += std::pow(k + j, -a);
  double x = k + M;
  s += std::pow(x, 1 - a) / (a - 1) + 0.5 * std::pow(x, -a);
  // Euler-Maclaurin: B_{2i}/(2i)! * a(a+1)...(a+2i-2) * x^(-a-2i+1)
  static constexpr double kB[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66};
  double rising = a, fact = 2;
  for (int i = 1; i <= 5; ++i) {
    s += kB[i - 1] / fact * rising * std::pow(x, -a - 2 * i + 1);
    rising *= (a + 2 * i - 1) * (a + 2 * i);
    fact *= (2 * i + 1) * (2 * i + 2);
  }
  return s;
}

CircleMap spiral_boundary_map(const SpiralDomain& sp, const std::vector<double>& d, SpiralArcs* arcs) {
  const int n = static_cast<int>(sp.widths.size());
  if (d.size() < std::size_t(n)) throw InvalidArgument("spiral_boundary_map: fewer than N separations");
  std::vector<double> m(n);
  for (int k = 0; k < n; ++k) {
    if (!(d[k] > 0) || !(d[k] < 2))
      throw InvalidArgument("spiral_boundary_map: separations must lie in (0, 2)");
    m[k] = std::asin(0.5 * d[k]);
    if (k > 0 && !(m[k] < m[k - 1]))
      throw InvalidArgument("spiral_boundary_map: arcs infeasible, separations must decrease");
  }
  SpiralArcs a;
  a.alpha.resize(n);
  a.beta.resize(n);
  double upper = kPi / 2;
  for (int k = 0; k < n; ++k) {
    double room = upper - m[k];
    if (!(room > 0)) throw InvalidArgument("spiral_boundary_map: angular budget exceeded");
    a.beta[k] = m[k] + 0.05 * room;
    double side = sp.right_sides[k].second - sp.right_sides[k].first;
    double before = k == 0 ? sp.start_cap.second - sp.start_cap.first
                           : sp.right_sides[k].first - sp.right_sides[k - 1].second;
    a.alpha[k] = a.beta[k] + (upper - a.beta[k]) * side / (side + before);
    upper = a.beta[k];
  }

  const double L = sp.domain.boundary().length();
  auto th = [L](double s) { return kTwoPi * s / L; };
  std::vector<std::pair<double, double>> knots{{0.0, a.alpha[0] - kTwoPi}};
  for (int k = 0; k < n; ++k) {
    knots.emplace_back(th(sp.right_sides[k].first), -a.alpha[k]);
    knots.emplace_back(th(sp.right_sides[k].second), -a.beta[k]);
  }
  // end cap [-beta_N, beta_N]: its midpoint goes to 1
  knots.emplace_back(th(sp.end_cap.second), a.beta[n - 1]);
  for (int k = n - 1; k >= 0; --k) {
    if (k < n - 1) knots.emplace_back(th(sp.left_sides[k].first), a.beta[k]);
    knots.emplace_back(th(sp.left_sides[k].second), a.alpha[k]);
  }
  knots.back() = {kTwoPi, a.alpha[0]};
  if (arcs) *arcs = a;
  return CircleMap(std::move(knots), sp.domain.boundary_ptr(), unit_circle_ptr());
}

double PowerSequence::operator()(double k) const { return std::pow(k, -exponent); }

CircleMap cusp_boundary_map(const CuspDomain& cusp, double p, const PowerSequence& eps, int slices,
                            CuspArcs* arcs) {
  if (!(p > 1 && p < 2)) throw InvalidArgument("cusp_boundary_map: p must lie in (1, 2)");
  if (std::abs(cusp.s - (p - 1)) > 1e-12)
    throw InvalidArgument("cusp_boundary_map: domain exponent must equal p - 1");
  return cusp_slice_map(cusp, p, eps, slices, arcs);
}

CircleMap cusp_slice_map(const CuspDomain& cusp, double p, const PowerSequence& eps, int slices,
                         CuspArcs* arcs) {
  if (!(p > 1 && p < 2)) throw InvalidArgument("cusp_boundary_map: p must lie in (1, 2)");
  if (slices < 1) throw InvalidArgument("cusp_boundary_map: need at least one slice");
  if (!(eps.exponent > 1)) throw InvalidArgument("cusp_boundary_map: eps_k must be summable");

  CuspArcs a;
  const double total = eps.total();
  const auto& branch = cusp.right_branch;
  const JordanCurve& curve = cusp.domain.boundary();
  a.heights.resize(slices + 1);
  a.angles.resize(slices + 1);
  a.d.assign(slices + 1, 0.0);
  for (int k = 0; k <= slices; ++k) {
    a.heights[k] = k == 0 ? 1.0 : eps.tail(k + 1) / total;
    if (k > 0) {
      a.d[k] = std::pow(std::log1p(double(k)), -1.0 / p);
      if (!(a.d[k] < 2)) throw InvalidArgument("cusp_boundary_map: angular budget exceeded (d_k >= 2)");
      a.angles[k] = std::asin(0.5 * a.d[k]);
    }
  }
  a.angles[0] = 0.5 * (a.angles[1] + kPi / 2);
  if (a.heights[slices] <= branch[1].y())
    throw InvalidArgument("cusp_boundary_map: slices finer than the domain polyline");

  auto theta_at_height = [&](double y) {
    auto it = std::lower_bound(branch.begin(), branch.end(), y,
                               [](const Point& q, double v) { return q.y() < v; });
    std::size_t i = std::clamp<std::ptrdiff_t>(it - branch.begin(), 1, std::ptrdiff_t(branch.size()) - 1);
    const Point &lo = branch[i - 1], &hi = branch[i];
    double w = (y - lo.y()) / (hi.y() - lo.y());
    return curve.angle_of(lo + w * (hi - lo));
  };

  std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
  std::vector<double> theta(slices + 1);
  for (int k = slices; k >= 0; --k) {
    theta[k] = k == 0 ? curve.angle_of(Point(1, 1)) : theta_at_height(a.heights[k]);
    knots.emplace_back(theta[k], a.angles[k]);
  }
  for (int k = 0; k <= slices; ++k) knots.emplace_back(kTwoPi - theta[k], kTwoPi - a.angles[k]);
  knots.emplace_back(kTwoPi, kTwoPi);
  if (arcs) *arcs = a;
  return CircleMap(std::move(knots), cusp.domain.boundary_ptr(), unit_circle_ptr());
}

}  // namespace sobex

namespace sobex {

CircleMap cantor_map(double ratio, double mix, int depth, double phase) {
  if (!(ratio > 0 && ratio < 0.5)) throw InvalidArgument("cantor_map: ratio must lie in (0, 1/2)");
  if (!(mix >= 0 && mix < 1)) throw InvalidArgument("cantor_map: mix must lie in [0, 1)");
  if (depth < 0 || depth > 20) throw InvalidArgument("cantor_map: depth must lie in [0, 20]");
  // kept intervals of generation `depth`, left endpoints in [0, 1)
  std::vector<double> left{0.0};
  double len = 1;
  for (int g = 0; g < depth; ++g) {
    std::vector<double> next;
    next.reserve(2 * left.size());
    for (double a : left) {
      next.push_back(a);
      next.push_back(a + len * (1 - ratio));
    }
    left = std::move(next);
    len *= ratio;
  }
  const double rise = 1.0 / left.size();
  std::vector<std::pair<double, double>> knots;
  for (std::size_t i = 0; i < left.size(); ++i)
    for (double x : {left[i], left[i] + len}) {
      double c = rise * (i + (x > left[i] ? 1 : 0));
      if (!knots.empty() && x <= knots.back().first / kTwoPi) continue;
      knots.emplace_back(kTwoPi * x, kTwoPi * ((1 - mix) * x + mix * c));
    }
  while (knots.back().first > kTwoPi * (1 - 1e-12)) knots.pop_back();
  knots.emplace_back(kTwoPi, kTwoPi);
  for (auto& [a, b] : knots) a += phase;
  return CircleMap(std::move(knots), unit_circle_ptr(), unit_circle_ptr());
}

CircleMap log_step_map(int steps, double alpha, double mix, int depth) {
  if (steps < 1) throw InvalidArgument("log_step_map: need at least one step");
  if (!(alpha > 0 && alpha <= 0.5)) throw InvalidArgument("log_step_map: alpha must lie in (0, 1/2]");
  if (!(mix >= 0 && mix < 1)) throw InvalidArgument("log_step_map: mix must lie in [0, 1)");
  if (depth < 1 || depth > 40) throw InvalidArgument("log_step_map: depth must lie in [1, 40]");
  const double P = kTwoPi / steps;
  // normalized profile on [-1, 1]
  auto g = [alpha](double x) {
    return x == 0 ? 0.0 : std::copysign(std::pow(1 + std::log(1 / std::abs(x)), -alpha), x);
  };
  std::vector<double> us{-1.0};
  for (int j = 1; j <= depth; ++j) us.push_back(-std::ldexp(1.0, -j));
  us.push_back(0.0);
  for (int j = depth; j >= 1; --j) us.push_back(std::ldexp(1.0, -j));
  us.push_back(1.0);
  std::vector<std::pair<double, double>> knots;
  for (int m = 0; m < steps; ++m)
    for (std::size_t i = 0; i + 1 < us.size(); ++i) {
      double x = 0.5 * P * (1 + us[i]);  // offset inside the period
      double y = 0.5 * P * (1 + g(us[i]));
      knots.emplace_back(m * P + x, m * P + (1 - mix) * x + mix * y);
    }
  knots.emplace_back(kTwoPi, kTwoPi);
  return CircleMap(std::move(knots), unit_circle_ptr(), unit_circle_ptr());
}

}  // namespace sobex
