#include "sobex/quadrature.hpp"

#include <cmath>
#include <map>
#include <algorithm>
#include <mutex>
#include <queue>

#include "sobex/types.hpp"

namespace sobex::quad {

namespace {

Rule compute_gauss_legendre(int n) {
  Rule r{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

void append(Rule& out, const Rule& part) {
  const auto m = out.nodes.size();
  out.nodes.conservativeResize(m + part.nodes.size());
  out.weights.conservativeResize(m + part.weights.size());
  out.nodes.tail(part.nodes.size()) = part.nodes;
  out.weights.tail(part.weights.size()) = part.weights;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule mapped(const Rule& rule, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  return {(rule.nodes.array() * half + mid).matrix(), rule.weights * half};
}

Rule graded_toward_left(double a, double b, int levels, int order) {
  const Rule& base = gauss_legendre(order);
  Rule out{Eigen::VectorXd(0), Eigen::VectorXd(0)};
  double hi = b;
  for (int k = 0; k < levels; ++k) {
    const double lo = (k + 1 == levels) ? a : a + 0.5 * (hi - a);
    append(out, mapped(base, lo, hi));
    hi = lo;
  }
  return out;
}

Rule graded_both(double a, double b, int levels, int order) {
  const double mid = 0.5 * (a + b);
  Rule left = graded_toward_left(a, mid, levels, order);
  Rule right = graded_toward_left(b, mid, levels, order);
  // graded_toward_left(b, mid) maps onto [mid, b] with reversed orientation.
  right.weights = -right.weights;
  append(left, right);
  return left;
}

double integrate(const std::function<double(double)>& f, const Rule& rule) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

namespace {

double tensor(const std::function<double(double, double)>& f, double x0, double x1, double y0,
              double y1) {
  const Rule& g = gauss_legendre(6);
  const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
  const double mx = 0.5 * (x0 + x1), my = 0.5 * (y0 + y1);
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      s += g.weights[i] * g.weights[j] * f(mx + hx * g.nodes[i], my + hy * g.nodes[j]);
  return s * hx * hy;
}

}  // namespace

double adaptive_2d(const std::function<double(double, double)>& f, double x0, double x1,
                   double y0, double y1, double tol, int max_cells) {
  struct Cell {
    double x0, x1, y0, y1, value, error;
    bool operator<(const Cell& o) const { return error < o.error; }
  };
  auto make = [&](double a0, double a1, double b0, double b1) {
    const double coarse = tensor(f, a0, a1, b0, b1);
    const double xm = 0.5 * (a0 + a1), ym = 0.5 * (b0 + b1);
    const double fine = tensor(f, a0, xm, b0, ym) + tensor(f, xm, a1, b0, ym) +
                        tensor(f, a0, xm, ym, b1) + tensor(f, xm, a1, ym, b1);
    return Cell{a0, a1, b0, b1, fine, std::abs(fine - coarse)};
  };
  std::priority_queue<Cell> heap;
  heap.push(make(x0, x1, y0, y1));
  double total = heap.top().value, err = heap.top().error;
  int cells = 1;
  while (err > tol * std::max(1e-300, std::abs(total)) && cells < max_cells) {
    Cell c = heap.top();
    heap.pop();
    total -= c.value;
    err -= c.error;
    const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
    for (const Cell& child : {make(c.x0, xm, c.y0, ym), make(xm, c.x1, c.y0, ym),
                              make(c.x0, xm, ym, c.y1), make(xm, c.x1, ym, c.y1)}) {
      total += child.value;
      err += child.error;
      heap.push(child);
    }
    cells += 3;
  }
  // Re-sum from the leaves to avoid drift from the running updates.
  std::vector<double> leaves;
  leaves.reserve(heap.size());
  while (!heap.empty()) {
    leaves.push_back(heap.top().value);
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  double s = 0.0;
  for (double v : leaves) s += v;
  return s;
}

}  // namespace sobex::quad
