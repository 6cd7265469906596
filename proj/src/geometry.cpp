#include "sobex/geometry.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <queue>

namespace sobex {

namespace {

double cross(const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); }

int orientation(const Point& a, const Point& b, const Point& c) {
  double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool boxes_meet(const Box& u, const Box& v) {
  return u.lo.x() <= v.hi.x() && v.lo.x() <= u.hi.x() && u.lo.y() <= v.hi.y() &&
         v.lo.y() <= u.hi.y();
}

constexpr std::size_t kLeafItems = 4;

}  // namespace

Box Box::around(const std::vector<Point>& pts) {
  Box b;
  if (pts.empty()) return b;
  b.lo = b.hi = pts.front();
  for (const Point& p : pts) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  return b;
}

double Box::distance(const Point& p) const {
  double dx = std::max({lo.x() - p.x(), 0.0, p.x() - hi.x()});
  double dy = std::max({lo.y() - p.y(), 0.0, p.y() - hi.y()});
  return std::hypot(dx, dy);
}

double segment_distance_sq(const Point& p, const Point& a, const Point& b) {
  Point d = b - a;
  double len2 = d.squaredNorm();
  double t = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * d)).squaredNorm();
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

SegmentIndex::SegmentIndex(std::vector<Point> a, std::vector<Point> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) throw InvalidArgument("SegmentIndex: endpoint count mismatch");
  order_.resize(a_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * a_.size() + 1);
  if (!a_.empty()) build(0, a_.size());
}

int SegmentIndex::build(std::size_t begin, std::size_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.box.lo = a_[order_[begin]].cwiseMin(b_[order_[begin]]);
  node.box.hi = a_[order_[begin]].cwiseMax(b_[order_[begin]]);
  for (std::size_t k = begin; k < end; ++k) {
    std::size_t i = order_[k];
    node.box.lo = node.box.lo.cwiseMin(a_[i]).cwiseMin(b_[i]);
    node.box.hi = node.box.hi.cwiseMax(a_[i]).cwiseMax(b_[i]);
  }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafItems) return id;
  int axis = (node.box.hi - node.box.lo).x() >= (node.box.hi - node.box.lo).y() ? 0 : 1;
  std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t i, std::size_t j) {
                     return a_[i][axis] + b_[i][axis] < a_[j][axis] + b_[j][axis];
                   });
  int l = build(begin, mid);
  int r = build(mid, end);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

std::pair<std::size_t, double> SegmentIndex::nearest(const Point& p) const {
  if (a_.empty()) throw InvalidArgument("SegmentIndex: empty");
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.emplace(nodes_[0].box.distance(p), 0);
  double best2 = INFINITY;
  std::size_t best = 0;
  while (!queue.empty()) {
    auto [d, n] = queue.top();
    queue.pop();
    if (d * d > best2) break;
    const Node& node = nodes_[n];
    if (node.left < 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) {
        std::size_t i = order_[k];
        double d2 = segment_distance_sq(p, a_[i], b_[i]);
        if (d2 < best2) {
          best2 = d2;
          best = i;
        }
      }
    } else {
      for (int c : {node.left, node.right}) {
        double dc = nodes_[c].box.distance(p);
        if (dc * dc <= best2) queue.emplace(dc, c);
      }
    }
  }
  return {best, std::sqrt(best2)};
}

std::vector<std::size_t> SegmentIndex::ray_candidates(const Point& p) const {
  std::vector<std::size_t> out;
  if (a_.empty()) return out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.box.hi.x() < p.x() || node.box.lo.y() > p.y() || node.box.hi.y() < p.y()) continue;
    if (node.left >= 0) {
      stack.push_back(node.left);
      stack.push_back(node.right);
      continue;
    }
    for (std::size_t k = node.begin; k < node.end; ++k) {
      std::size_t i = order_[k];
      const Point &a = a_[i], &b = b_[i];
      if (std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y()) &&
          std::max(a.x(), b.x()) >= p.x())
        out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void SegmentIndex::pairs(int u, int v, const std::function<bool(std::size_t, std::size_t)>& skip,
                         std::vector<std::pair<std::size_t, std::size_t>>& out) const {
  const Node& U = nodes_[u];
  const Node& V = nodes_[v];
  if (!boxes_meet(U.box, V.box)) return;
  if (U.left < 0 && V.left < 0) {
    for (std::size_t x = U.begin; x < U.end; ++x) {
      for (std::size_t y = (u == v ? x + 1 : V.begin); y < V.end; ++y) {
        std::size_t i = order_[x], j = order_[y];
        if (i > j) std::swap(i, j);
        if (skip(i, j)) continue;
        if (segments_intersect(a_[i], b_[i], a_[j], b_[j])) out.emplace_back(i, j);
      }
    }
    return;
  }
  if (u == v) {
    pairs(U.left, U.left, skip, out);
    pairs(U.right, U.right, skip, out);
    pairs(U.left, U.right, skip, out);
    return;
  }
  bool split_u = V.left < 0 || (U.left >= 0 && U.end - U.begin >= V.end - V.begin);
  if (split_u) {
    pairs(U.left, v, skip, out);
    pairs(U.right, v, skip, out);
  } else {
    pairs(u, V.left, skip, out);
    pairs(u, V.right, skip, out);
  }
}

std::vector<std::pair<std::size_t, std::size_t>> SegmentIndex::intersecting_pairs(
    const std::function<bool(std::size_t, std::size_t)>& skip) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!a_.empty()) pairs(0, 0, skip, out);
  std::sort(out.begin(), out.end());
  return out;
}

JordanCurve::JordanCurve(std::vector<Point> vertices, std::optional<std::string> analytic_tag,
                         bool rectifiable)
    : tag_(std::move(analytic_tag)), rectifiable_(rectifiable) {
  for (const Point& p : vertices)
    if (!p.allFinite()) throw InvalidArgument("JordanCurve: non-finite vertex");
  vertices_.reserve(vertices.size() + 1);
  for (const Point& p : vertices)
    if (vertices_.empty() || p != vertices_.back()) vertices_.push_back(p);
  if (vertices_.size() > 1 && vertices_.front() == vertices_.back()) vertices_.pop_back();
  if (vertices_.size() < 3) throw InvalidArgument("JordanCurve: fewer than 3 distinct vertices");
  vertices_.push_back(vertices_.front());

  const std::size_t n = vertices_.size() - 1;
  cumulative_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    cumulative_[i + 1] = cumulative_[i] + (vertices_[i + 1] - vertices_[i]).norm();

  std::vector<Point> a(vertices_.begin(), vertices_.end() - 1);
  std::vector<Point> b(vertices_.begin() + 1, vertices_.end());
  index_ = std::make_shared<SegmentIndex>(std::move(a), std::move(b));

  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices_[i];
    const Point& q = vertices_[i + 1];
    const Point& r = vertices_[(i + 2) % n];
    if (cross(q - p, r - q) == 0 && (q - p).dot(r - q) < 0)
      throw InvalidArgument("JordanCurve: polyline folds back on itself at vertex " +
                            std::to_string((i + 1) % n));
  }
  auto adjacent = [n](std::size_t i, std::size_t j) { return j == i + 1 || (i == 0 && j == n - 1); };
  auto hits = index_->intersecting_pairs(adjacent);
  if (!hits.empty())
    throw InvalidArgument("JordanCurve: self-intersection between segments " +
                          std::to_string(hits.front().first) + " and " +
                          std::to_string(hits.front().second));
}

double JordanCurve::signed_area() const {
  double a = 0;
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) a += cross(vertices_[i], vertices_[i + 1]);
  return 0.5 * a;
}

Point JordanCurve::at_arclength(double s) const {
  double L = length();
  s = std::fmod(s, L);
  if (s < 0) s += L;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0),
                                        segment_count() - 1);
  double seg = cumulative_[i + 1] - cumulative_[i];
  double t = seg > 0 ? (s - cumulative_[i]) / seg : 0.0;
  return vertices_[i] + t * (vertices_[i + 1] - vertices_[i]);
}

double JordanCurve::arclength_of(const Point& p) const {
  auto [i, dist] = index_->nearest(p);
  (void)dist;
  const Point& a = vertices_[i];
  const Point& b = vertices_[i + 1];
  Point d = b - a;
  double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return cumulative_[i] + t * (cumulative_[i + 1] - cumulative_[i]);
}

Point JordanCurve::at_angle(double theta) const {
  if (is_unit_circle()) return {std::cos(theta), std::sin(theta)};
  return at_arclength(length() * theta / kTwoPi);
}

Point JordanCurve::tangent_at_angle(double theta) const {
  if (is_unit_circle()) return {-std::sin(theta), std::cos(theta)};
  double L = length();
  double s = std::fmod(L * theta / kTwoPi, L);
  if (s < 0) s += L;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0),
                                        segment_count() - 1);
  Point d = vertices_[i + 1] - vertices_[i];
  return d.normalized() * (L / kTwoPi);
}

double JordanCurve::angle_of(const Point& p) const {
  double theta;
  if (is_unit_circle()) {
    theta = std::atan2(p.y(), p.x());
  } else {
    theta = kTwoPi * arclength_of(p) / length();
  }
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0) theta += kTwoPi;
  return theta;
}

JordanDomain::JordanDomain(JordanCurve boundary, Point witness) : witness_(std::move(witness)) {
  if (boundary.signed_area() < 0) {
    std::vector<Point> v(boundary.vertices().rbegin(), boundary.vertices().rend());
    boundary = JordanCurve(std::move(v), boundary.analytic_tag(), boundary.rectifiable());
  }
  boundary_ = std::make_shared<const JordanCurve>(std::move(boundary));
  box_ = boundary_->bounding_box();
  if (!contains(witness_)) throw InvalidArgument("JordanDomain: witness point is not interior");
}

double JordanDomain::diameter() const { return box_.diameter(); }

double JordanDomain::dist_to_boundary(const Point& z) const {
  return boundary_->index().nearest(z).second;
}

bool JordanDomain::contains(const Point& z) const {
  if (!z.allFinite() || !box_.contains(z)) return false;
  double scale = std::max(z.cwiseAbs().maxCoeff(), DBL_MIN);
  if (dist_to_boundary(z) <= 4 * DBL_EPSILON * scale) return false;
  const SegmentIndex& idx = boundary_->index();
  bool inside = false;
  for (std::size_t i : idx.ray_candidates(z)) {
    const Point &a = idx.start(i), &b = idx.end(i);
    if ((a.y() > z.y()) != (b.y() > z.y())) {
      double x = a.x() + (z.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (z.x() < x) inside = !inside;
    }
  }
  return inside;
}

JordanCurve make_unit_circle(int resolution) {
  if (resolution < 3) throw InvalidArgument("make_unit_circle: resolution < 3");
  std::vector<Point> v(resolution);
  for (int i = 0; i < resolution; ++i) {
    double t = kTwoPi * i / resolution;
    v[i] = Point(std::cos(t), std::sin(t));
  }
  return JordanCurve(std::move(v), std::string("circle"));
}

JordanDomain make_unit_disk(int resolution) {
  return JordanDomain(make_unit_circle(resolution), Point(0, 0));
}

JordanDomain make_unit_square() {
  return JordanDomain(JordanCurve({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), Point(0.5, 0.5));
}

JordanDomain make_regular_polygon(int sides, double phase) {
  if (sides < 3) throw InvalidArgument("make_regular_polygon: fewer than 3 sides");
  std::vector<Point> v(sides);
  for (int i = 0; i < sides; ++i) {
    double t = phase + kTwoPi * i / sides;
    v[i] = Point(std::cos(t), std::sin(t));
  }
  return JordanDomain(JordanCurve(std::move(v)), Point(0, 0));
}

JordanDomain make_l_shape() {
  return JordanDomain(JordanCurve({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
                      Point(0.5, 0.5));
}

CuspDomain make_cusp_domain(double s, const CuspOptions& options) {
  if (!(s > 0) || !std::isfinite(s)) throw InvalidArgument("make_cusp_domain: s must be positive");
  if (options.resolution < 4) throw InvalidArgument("make_cusp_domain: resolution < 4");
  if (!(options.depth > 0 && options.depth < 1))
    throw InvalidArgument("make_cusp_domain: depth must lie in (0, 1)");
  const int n = options.resolution;
  const double max_len = 2.0 / n;
  auto graph = [s](double y) { return Point(std::pow(y, 1.0 / s), y); };

  std::vector<double> heights(n);
  for (int j = 0; j < n; ++j) heights[j] = std::pow(options.depth, 1.0 - double(j) / (n - 1));
  heights.back() = 1.0;

  std::vector<Point> right{Point(0, 0)};
  for (double y : heights) {
    Point p = graph(y);
    const Point prev = right.back();
    double len = (p - prev).norm();
    if (len > max_len && right.size() > 1) {
      int pieces = static_cast<int>(std::ceil(len / max_len));
      for (int m = 1; m < pieces; ++m) {
        double ym = prev.y() + (y - prev.y()) * m / pieces;
        right.push_back(graph(ym));
      }
    }
    right.push_back(p);
  }

  int cap = options.cap_segments > 0 ? options.cap_segments : std::max(16, n / 2);
  std::vector<Point> arc(cap + 1);
  for (int i = 0; i <= cap; ++i) {
    double t = kPi * i / cap;
    arc[i] = Point(std::cos(t), 1.0 + std::sin(t));
  }
  arc.front() = Point(1, 1);
  arc.back() = Point(-1, 1);

  std::vector<Point> v(right.begin(), right.end());
  v.insert(v.end(), arc.begin() + 1, arc.end());
  for (std::size_t i = right.size() - 2; i >= 1; --i) v.emplace_back(-right[i].x(), right[i].y());

  JordanCurve curve(std::move(v), "cusp:" + std::to_string(s));
  return CuspDomain{JordanDomain(std::move(curve), Point(0, 1.5)), s, std::move(right),
                    std::move(arc)};
}

SpiralDomain make_spiral_domain(int n, const std::vector<double>& widths,
                                const std::vector<double>& heights,
                                const std::vector<double>& gaps) {
  if (n < 1) throw InvalidArgument("make_spiral_domain: N must be at least 1");
  if (widths.size() < std::size_t(n) || heights.size() < std::size_t(n) ||
      gaps.size() + 1 < std::size_t(n))
    throw InvalidArgument("make_spiral_domain: sequences shorter than N");
  for (int k = 0; k < n; ++k) {
    if (!(widths[k] > 0) || !(heights[k] > 0))
      throw InvalidArgument("make_spiral_domain: widths and heights must be positive");
    if (k + 1 < n && !(gaps[k] > 0))
      throw InvalidArgument("make_spiral_domain: gaps must be positive (rectangles overlap)");
    if (k + 1 < n && widths[k + 1] > widths[k])
      throw InvalidArgument("make_spiral_domain: widths must be non-increasing");
  }
  std::vector<double> a(n);
  a[0] = 0;
  for (int k = 1; k < n; ++k) a[k] = a[k - 1] + widths[k - 1] + gaps[k - 1];

  // loop k joins the top of R_k to the bottom of R_{k+1}; loop k encloses loop k+1
  std::vector<double> top(n, 0), right(n, 0), bottom(n, 0), c(n, 0);
  for (int k = n - 2; k >= 0; --k) {
    c[k] = widths[k + 1];
    double g = gaps[k];
    double outer_top = k + 2 < n ? top[k + 1] + c[k + 1] : 0.0;
    double outer_right = k + 2 < n ? right[k + 1] + c[k + 1] : 0.0;
    double outer_bottom = k + 2 < n ? bottom[k + 1] + c[k + 1] : 0.0;
    top[k] = std::max({heights[k], heights[k + 1], outer_top}) + g;
    right[k] = std::max(a[n - 1] + widths[n - 1], outer_right) + g;
    bottom[k] = outer_bottom + g;
  }

  std::vector<Point> v;
  std::vector<std::size_t> right_from(n), right_to(n), left_from(n), left_to(n);
  v.emplace_back(a[0], 0);
  for (int k = 0; k < n; ++k) {
    right_from[k] = v.size();
    v.emplace_back(a[k] + widths[k], 0);
    right_to[k] = v.size();
    v.emplace_back(a[k] + widths[k], heights[k]);
    if (k + 1 < n) {
      v.emplace_back(a[k] + c[k], heights[k]);
      v.emplace_back(a[k] + c[k], top[k]);
      v.emplace_back(right[k], top[k]);
      v.emplace_back(right[k], -bottom[k]);
      v.emplace_back(a[k + 1] + widths[k + 1], -bottom[k]);
    }
  }
  std::size_t end_from = v.size() - 1;
  for (int k = n - 1; k >= 0; --k) {
    left_from[k] = v.size();
    v.emplace_back(a[k], heights[k]);
    left_to[k] = v.size();
    v.emplace_back(a[k], 0);
    if (k > 0) {
      int j = k - 1;
      v.emplace_back(a[k], -bottom[j] - c[j]);
      v.emplace_back(right[j] + c[j], -bottom[j] - c[j]);
      v.emplace_back(right[j] + c[j], top[j] + c[j]);
      v.emplace_back(a[j], top[j] + c[j]);
    }
  }
  std::size_t end_to = left_from[n - 1];
  // v.back() is (a_1, 0) == v.front(): the start cap is the bottom of R_1
  std::vector<double> cum(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) cum[i] = cum[i - 1] + (v[i] - v[i - 1]).norm();

  SpiralDomain out{JordanDomain(JordanCurve(v, std::string("spiral"), false),
                                Point(a[0] + 0.5 * widths[0], 0.5 * heights[0])),
                   std::vector<double>(widths.begin(), widths.begin() + n),
                   std::vector<double>(heights.begin(), heights.begin() + n),
                   std::vector<double>(gaps.begin(), gaps.begin() + std::max(n - 1, 0)),
                   a,
                   {},
                   {},
                   {cum[end_from], cum[end_to]},
                   {0.0, cum[1]}};
  for (int k = 0; k < n; ++k) {
    out.right_sides.emplace_back(cum[right_from[k]], cum[right_to[k]]);
    out.left_sides.emplace_back(cum[left_from[k]], cum[left_to[k]]);
  }
  if (std::abs(out.domain.boundary().length() - cum.back()) > 1e-9 * cum.back())
    throw InvalidArgument("make_spiral_domain: boundary was altered during validation");
  return out;
}

SpiralDomain make_spiral_domain(int n) {
  std::vector<double> w(n), h(n), g(n);
  for (int k = 1; k <= n; ++k) {
    w[k - 1] = std::ldexp(1.0, -k);
    h[k - 1] = 1.0 / k;
    g[k - 1] = std::ldexp(1.0, -(k + 2));
  }
  return make_spiral_domain(n, w, h, g);
}

JordanDomain make_target_ytau(double tau, int resolution) {
  if (!(tau > 0) || !std::isfinite(tau)) throw InvalidArgument("make_target_ytau: tau must be positive");
  if (resolution < 8) throw InvalidArgument("make_target_ytau: resolution < 8");
  auto phi = [tau](Complex z) { return -std::pow(-std::log((1.0 - z) / 3.0), -tau); };
  std::vector<Point> v{Point(0, 0)};
  for (int j = 1; j < resolution; ++j) {
    double u = 2.0 * j / resolution;
    double theta = u <= 1 ? kPi * std::pow(u, 4) : kTwoPi - kPi * std::pow(2 - u, 4);
    v.push_back(to_point(phi(std::polar(1.0, theta))));
  }
  return JordanDomain(JordanCurve(std::move(v), "ytau:" + std::to_string(tau)),
                      to_point(phi(Complex(0, 0))));
}

}  // namespace sobex
