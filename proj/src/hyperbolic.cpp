#include "sobex/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "sobex/parallel.hpp"
#include "sobex/quadrature.hpp"

namespace sobex {

namespace {

constexpr int kStencil[16][2] = {{1, 0},  {0, 1},   {-1, 0},  {0, -1}, {1, 1},  {-1, 1}, {-1, -1}, {1, -1},
                                 {2, 1},  {1, 2},   {-1, 2},  {-2, 1}, {-2, -1}, {-1, -2}, {1, -2}, {2, -1}};

double dist_to_polyline(const Point& p, const std::vector<Point>& path) {
  if (path.size() == 1) return (p - path[0]).norm();
  double best = INFINITY;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    best = std::min(best, std::sqrt(segment_distance_sq(p, path[i], path[i + 1])));
  return best;
}

std::int64_t to_fixed(double w) { return static_cast<std::int64_t>(std::llround(w / kQhQuantum)); }

}  // namespace

int QhGrid::locate(const Point& p) const {
  if (cells.empty()) return -1;
  const Cell& root = cells[0];
  if (std::abs(p.x() - root.cx) > root.h / 2 || std::abs(p.y() - root.cy) > root.h / 2) return -1;
  int c = 0;
  while (cells[c].child >= 0) {
    const Cell& cell = cells[c];
    int q = (p.x() >= cell.cx ? 1 : 0) + (p.y() >= cell.cy ? 2 : 0);
    c = cell.child + q;
  }
  return cells[c].node;
}

std::vector<std::int64_t> QhGrid::shortest_fixed(int from) const {
  if (from < 0 || from >= node_count()) throw InvalidArgument("qh grid: source node out of range");
  std::vector<std::int64_t> d(node_count(), -1);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<char> done(node_count(), 0);
  d[from] = 0;
  heap.emplace(0, from);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (int k = offsets[u]; k < offsets[u + 1]; ++k) {
      int v = targets[k];
      std::int64_t nd = du + weights[k];
      if (d[v] < 0 || nd < d[v]) {
        d[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return d;
}

std::vector<double> QhGrid::shortest_from(int from) const {
  auto f = shortest_fixed(from);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] < 0 ? INFINITY : f[i] * kQhQuantum;
  return out;
}

QhGrid make_qh_grid(std::shared_ptr<const JordanDomain> domain, const Point& x0, const QhOptions& opt) {
  if (!domain) throw InvalidArgument("make_qh_grid: missing domain");
  if (!(opt.delta > 0) || !(opt.kappa > 0 && opt.kappa <= 1))
    throw InvalidArgument("make_qh_grid: delta must be positive and kappa in (0, 1]");
  if (!domain->contains(x0)) throw InvalidArgument("make_qh_grid: x0 is outside the domain");
  QhGrid g;
  g.domain = domain;
  g.options = opt;
  const auto& v = domain->boundary().vertices();
  Point lo = v[0], hi = v[0];
  for (const auto& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double side = (hi - lo).maxCoeff() * 1.001;
  const Point mid = 0.5 * (lo + hi);
  const bool focused = !opt.focus.empty();

  struct Info {
    double dist;
    bool inside;
  };
  std::vector<Info> info;
  g.cells.push_back({mid.x(), mid.y(), side});
  info.push_back({domain->dist_to_boundary(mid), domain->contains(mid)});
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    const QhGrid::Cell cell = g.cells[c];
    const Info in = info[c];
    const Point center(cell.cx, cell.cy);
    if (!in.inside && in.dist > cell.h * M_SQRT1_2) continue;
    double floor = opt.delta;
    if (focused && dist_to_polyline(center, opt.focus) > opt.focus_width * cell.h)
      floor = std::max(opt.delta, opt.coarse);
    bool refine = cell.h > floor && (!in.inside || cell.h > opt.kappa * in.dist);
    if (!refine) {
      if (in.inside && in.dist > cell.h / 2) {
        g.cells[c].node = static_cast<int>(g.spacing.size());
        g.spacing.push_back(cell.h);
        g.boundary_dist.push_back(in.dist);
      }
      continue;
    }
    const int first = static_cast<int>(g.cells.size());
    g.cells[c].child = first;
    for (int q = 0; q < 4; ++q) {
      double cx = cell.cx + ((q & 1) ? 0.25 : -0.25) * cell.h;
      double cy = cell.cy + ((q & 2) ? 0.25 : -0.25) * cell.h;
      Point p(cx, cy);
      double d = domain->dist_to_boundary(p);
      double step = (p - center).norm();
      bool inside = step < in.dist ? in.inside : domain->contains(p);
      g.cells.push_back({cx, cy, cell.h / 2});
      info.push_back({d, inside});
    }
    for (int q = 3; q >= 0; --q) stack.push_back(first + q);
  }
  const int n = g.node_count();
  if (n == 0) throw InvalidArgument("make_qh_grid: no interior nodes");
  g.nodes.resize(2, n);
  for (const auto& cell : g.cells)
    if (cell.node >= 0) g.nodes.col(cell.node) = Point(cell.cx, cell.cy);

  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(n);
  parallel_for(n, [&](std::size_t i) {
    const Point ci = g.nodes.col(i);
    const double h = g.spacing[i];
    for (const auto& o : kStencil) {
      int j = g.locate(ci + h * Point(o[0], o[1]));
      if (j < 0 || j == static_cast<int>(i)) continue;
      const Point cj = g.nodes.col(j);
      double len = (cj - ci).norm();
      double dm = domain->dist_to_boundary(0.5 * (ci + cj));
      if (dm > len / 2) adj[i].emplace_back(j, to_fixed(len / dm));
    }
  });
  std::vector<std::tuple<int, int, std::int64_t>> edges;
  for (int i = 0; i < n; ++i)
    for (auto [j, w] : adj[i]) {
      edges.emplace_back(i, j, w);
      edges.emplace_back(j, i, w);
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const auto& a, const auto& b) {
                            return std::get<0>(a) == std::get<0>(b) && std::get<1>(a) == std::get<1>(b);
                          }),
              edges.end());
  g.offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++g.offsets[std::get<0>(e) + 1];
  for (int i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.targets.reserve(edges.size());
  g.weights.reserve(edges.size());
  for (const auto& e : edges) {
    g.targets.push_back(std::get<1>(e));
    g.weights.push_back(std::get<2>(e));
  }
  g.source = g.locate(x0);
  if (g.source < 0) throw InvalidArgument("make_qh_grid: x0 is too close to the boundary for this grid");
  g.distance = g.shortest_from(g.source);
  return g;
}

double qh_distance(const QhGrid& grid, const Point& x) {
  if (!grid.domain->contains(x)) throw InvalidArgument("qh_distance: point outside the domain");
  int k = grid.locate(x);
  if (k < 0) throw InvalidArgument("qh_distance: point is not covered by a grid node");
  return grid.distance[k];
}

double disk_hyperbolic(Complex z) {
  double r = std::abs(z);
  if (!(r < 1)) throw InvalidArgument("disk_hyperbolic: |z| must be < 1");
  return -std::log1p(-r * r);
}

std::vector<Point> approach_samples(const JordanDomain& domain, const Point& from, const Point& to,
                                    const std::vector<double>& distances) {
  const double d0 = domain.dist_to_boundary(from);
  std::vector<Point> out;
  for (double target : distances) {
    if (!(target > 0 && target < d0)) throw InvalidArgument("approach_samples: distance out of range");
    // dist is 1-Lipschitz along the segment; find the last crossing before `to`
    double a = 0, b = 1;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      Point p = from + m * (to - from);
      if (domain.contains(p) && domain.dist_to_boundary(p) > target) a = m;
      else b = m;
      if (b - a < 1e-17) break;
    }
    out.push_back(from + a * (to - from));
  }
  return out;
}

GrowthFit growth_exponent(std::shared_ptr<const JordanDomain> domain, const Point& x0,
                          const std::vector<Point>& approach, QhOptions options) {
  const double diam = domain->diameter();
  std::vector<Point> pts;
  std::vector<double> dists;
  for (const auto& p : approach) {
    if (!domain->contains(p)) throw InvalidArgument("growth_exponent: sample outside the domain");
    double d = domain->dist_to_boundary(p);
    if (d < 0.1 * diam) {
      pts.push_back(p);
      dists.push_back(d);
    }
  }
  if (pts.size() < 4) throw InvalidArgument("growth_exponent: fewer than 4 boundary-near samples");
  if (options.focus.empty()) {
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return dists[a] > dists[b]; });
    options.focus.push_back(x0);
    for (auto i : order) options.focus.push_back(pts[i]);
    options.delta = std::min(options.delta, options.kappa * *std::min_element(dists.begin(), dists.end()) / 4);
  }
  QhGrid grid = make_qh_grid(domain, x0, options);
  GrowthFit fit;
  fit.grid_nodes = grid.node_count();
  Eigen::MatrixXd A(pts.size(), 2);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double h = qh_distance(grid, pts[i]);
    if (!std::isfinite(h) || h <= 0) throw NonConvergence("growth_exponent: sample not reachable on the grid", h);
    fit.samples.emplace_back(h, dists[i]);
    A(i, 0) = std::log(1 / dists[i]);
    A(i, 1) = 1;
    y(i) = std::log(h);
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
  fit.slope = c(0);
  fit.intercept = c(1);
  double mean = y.mean();
  double ss_tot = (y.array() - mean).square().sum();
  double ss_res = (A * c - y).squaredNorm();
  fit.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  return fit;
}

double moc_oscillation(const std::function<Complex(Complex)>& f, Complex z, double t, const MocOptions& o) {
  std::vector<Complex> img;
  img.reserve(o.directions);
  for (int k = 0; k < o.directions; ++k) {
    Complex w = z + std::polar(t, kTwoPi * k / o.directions);
    if (o.inside && !o.inside(w)) continue;
    img.push_back(f(w));
  }
  double osc = 0;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j) osc = std::max(osc, std::abs(img[i] - img[j]));
  return osc;
}

EnergyReport moc_integral(const std::function<Complex(Complex)>& f, Complex z, double r, double delta_min,
                          const MocOptions& o) {
  if (!(r > 0) || !(delta_min > 0) || o.halvings < 0)
    throw InvalidArgument("moc_integral: need r > 0, delta_min > 0, halvings >= 0");
  if (delta_min * std::ldexp(1.0, o.halvings) > r) throw InvalidArgument("moc_integral: delta_min 2^halvings exceeds r");
  if (o.directions < 2) throw InvalidArgument("moc_integral: at least two directions");
  // Gauss panels in log t, one per octave, down to delta_min
  const auto& rule = quad::gauss_legendre(8);
  auto panel = [&](double a, double b) {
    double la = std::log(a), lb = std::log(b), h = 0.5 * (lb - la), m = 0.5 * (la + lb), s = 0;
    for (int k = 0; k < 8; ++k) {
      double w = moc_oscillation(f, z, std::exp(m + h * rule.nodes(k)), o);
      s += rule.weights(k) * w * w;
    }
    return h * s;
  };
  EnergyReport rep;
  rep.p = 2;
  rep.protocol = "omega from " + std::to_string(o.directions) + " circle samples; Gauss-8 per octave in log t";
  double top = delta_min * std::ldexp(1.0, o.halvings);
  double value = 0;
  for (double a = top, b = r; b > a * (1 + 1e-12);) {
    double next = std::max(a, b / 2);
    value += panel(next, b);
    b = next;
  }
  rep.history.emplace_back(1 / top, value);
  for (int k = 0; k < o.halvings; ++k) {
    value += panel(top / 2, top);
    top /= 2;
    rep.history.emplace_back(1 / top, value);
  }
  finish_report(rep, o.escalation);
  return rep;
}

}  // namespace sobex
