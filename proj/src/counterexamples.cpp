#include "sobex/counterexamples.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "sobex/parallel.hpp"

namespace sobex {

namespace {

double branch_x(const std::vector<Point>& branch, double y) {
  auto it = std::lower_bound(branch.begin(), branch.end(), y, [](const Point& q, double v) { return q.y() < v; });
  std::size_t i = std::clamp<std::ptrdiff_t>(it - branch.begin(), 1, std::ptrdiff_t(branch.size()) - 1);
  const Point &lo = branch[i - 1], &hi = branch[i];
  double w = (y - lo.y()) / (hi.y() - lo.y());
  return lo.x() + w * (hi.x() - lo.x());
}

using Poly = std::vector<Point>;

// Sutherland-Hodgman against a(x) >= 0 for an axis half-plane
Poly clip(const Poly& in, int axis, double value, bool keep_above) {
  Poly out;
  auto side = [&](const Point& q) { return keep_above ? q(axis) - value : value - q(axis); };
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Point &a = in[i], &b = in[(i + 1) % in.size()];
    double sa = side(a), sb = side(b);
    if (sa >= 0) out.push_back(a);
    if ((sa >= 0) != (sb >= 0)) {
      Point c = a + (sa / (sa - sb)) * (b - a);
      c(axis) = value;
      out.push_back(c);
    }
  }
  return out;
}

double poly_area(const Poly& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point &u = p[i], &v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - u.y() * v.x();
  }
  return 0.5 * std::abs(a);
}

bool overlap(const Slice& a, const Slice& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

}  // namespace

double spiral_h(double k) { return 1 / k; }
double spiral_d(double k) { return 1 / std::log1p(k); }
double cusp_d(double k, double p) { return std::pow(std::log1p(k), -1 / p); }

double SliceFamily::area(std::size_t k) const {
  const Slice& sl = slices.at(k);
  if (kind == "cusp") {
    double e = 1 + 1 / s;
    return 2 / e * (std::pow(sl.y1, e) - std::pow(sl.y0, e));
  }
  return (sl.x1 - sl.x0) * (sl.y1 - sl.y0);
}

SliceFamily cusp_slices(const CuspDomain& cusp, double p, const PowerSequence& eps, int n) {
  if (n < 1) throw InvalidArgument("cusp_slices: need at least one slice");
  if (!(p > 1 && p < 2)) throw InvalidArgument("cusp_slices: p must lie in (1, 2)");
  SliceFamily f;
  f.kind = "cusp";
  f.s = cusp.s;
  const double total = eps.total();
  double upper = 1;
  for (int k = 1; k <= n; ++k) {
    double lower = eps.tail(k + 1) / total;
    if (lower <= cusp.right_branch[1].y()) throw InvalidArgument("cusp_slices: slices finer than the domain polyline");
    f.slices.push_back({-2, 2, lower, upper, eps(k) / total, 2 * branch_x(cusp.right_branch, upper), cusp_d(k, p)});
    upper = lower;
  }
  return f;
}

SliceFamily spiral_slices(const SpiralDomain& sp, const std::vector<double>& d) {
  const std::size_t n = sp.widths.size();
  if (d.size() < n) throw InvalidArgument("spiral_slices: fewer than N separations");
  SliceFamily f;
  f.kind = "spiral";
  for (std::size_t k = 0; k < n; ++k)
    f.slices.push_back({sp.left_x[k], sp.left_x[k] + sp.widths[k], 0, sp.heights[k], sp.heights[k], sp.widths[k], d[k]});
  return f;
}

void validate(const SliceFamily& f, const JordanDomain& domain) {
  for (std::size_t i = 0; i < f.slices.size(); ++i) {
    const Slice& a = f.slices[i];
    if (!(a.x1 > a.x0 && a.y1 > a.y0)) throw InvalidArgument("slice family: empty slice");
    for (std::size_t j = i + 1; j < f.slices.size(); ++j)
      if (overlap(a, f.slices[j])) throw InvalidArgument("slice family: slices overlap");
    double ym = 0.5 * (a.y0 + a.y1);
    std::vector<Point> probes{Point(0, ym)};
    if (f.kind != "cusp") {
      double ix = 1e-3 * (a.x1 - a.x0), iy = 1e-3 * (a.y1 - a.y0);
      probes = {Point(0.5 * (a.x0 + a.x1), ym), Point(a.x0 + ix, a.y0 + iy), Point(a.x1 - ix, a.y0 + iy),
                Point(a.x0 + ix, a.y1 - iy), Point(a.x1 - ix, a.y1 - iy)};
    }
    for (const auto& q : probes)
      if (!domain.contains(q)) throw InvalidArgument("slice family: slice leaves the domain");
  }
}

double spiral_lower_bound(std::int64_t n, const std::function<double(double)>& h,
                          const std::function<double(double)>& d) {
  if (n < 1) throw InvalidArgument("spiral_lower_bound: N must be >= 1");
  return parallel_sum(n, [&](std::size_t i) {
    double k = double(i + 1);
    return h(k) * d(k);
  });
}

double cusp_lower_bound(std::int64_t n, double p, const PowerSequence& eps, const std::function<double(double)>& d) {
  if (n < 1) throw InvalidArgument("cusp_lower_bound: N must be >= 1");
  if (!(p > 1 && p < 2)) throw InvalidArgument("cusp_lower_bound: p must lie in (1, 2)");
  if (!(eps.exponent > 1)) throw InvalidArgument("cusp_lower_bound: eps_k must be summable");
  return parallel_sum(n, [&](std::size_t i) {
    double k = double(i + 1);
    double dk = d ? d(k) : cusp_d(k, p);
    return std::pow(dk, p) * eps(k) / eps.tail(k);
  });
}

std::vector<SliceBound> slice_energy_bound(const MeshField& field, const SliceFamily& f, double p) {
  if (!(p >= 1)) throw InvalidArgument("slice_energy_bound: p must be >= 1");
  const TriMesh& m = *field.mesh;
  std::vector<SliceBound> out(f.slices.size());
  parallel_for(f.slices.size(), [&](std::size_t k) {
    const Slice& sl = f.slices[k];
    std::vector<double> a, g;
    for (Eigen::Index e = 0; e < m.element_count(); ++e) {
      Poly tri{m.nodes.col(m.tris(0, e)), m.nodes.col(m.tris(1, e)), m.nodes.col(m.tris(2, e))};
      double lo = std::min({tri[0].y(), tri[1].y(), tri[2].y()}), hi = std::max({tri[0].y(), tri[1].y(), tri[2].y()});
      if (hi <= sl.y0 || lo >= sl.y1) continue;
      Poly c = clip(clip(clip(clip(tri, 1, sl.y0, true), 1, sl.y1, false), 0, sl.x0, true), 0, sl.x1, false);
      if (c.size() < 3) continue;
      double area = poly_area(c);
      if (area == 0) continue;
      a.push_back(area);
      g.push_back(field.gradients[e].norm());
    }
    SliceBound& b = out[k];
    std::vector<double> tp(a.size()), t1(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      tp[i] = a[i] * std::pow(g[i], p);
      t1[i] = a[i] * g[i];
    }
    b.measured = pairwise_sum(tp);
    b.l1 = pairwise_sum(t1);
    b.area = pairwise_sum(a);
    b.holder = b.area > 0 ? std::pow(b.l1, p) / std::pow(b.area, p - 1) : 0;
    b.separation = sl.d * sl.height;
  });
  for (std::size_t k = 0; k < out.size(); ++k) {
    double nominal = f.area(k);
    if (!(out[k].area > 0.9 * nominal && out[k].area < 1.1 * nominal))
      throw InvalidArgument("slice_energy_bound: slice " + std::to_string(k + 1) + " not covered by the mesh");
  }
  return out;
}

DivergenceReport divergence_certificate(const std::function<double(std::int64_t)>& bound,
                                        const std::vector<std::int64_t>& levels, double escalation) {
  if (levels.empty()) throw InvalidArgument("divergence_certificate: no levels");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] < 2 || (i > 0 && levels[i] <= levels[i - 1]))
      throw InvalidArgument("divergence_certificate: levels must be increasing and >= 2");
  DivergenceReport r;
  r.escalation = escalation;
  for (auto n : levels) r.table.emplace_back(n, bound(n));
  std::vector<std::pair<double, double>> hist;
  for (auto [n, v] : r.table) hist.emplace_back(double(n), v);
  r.certificate = escalates(hist, escalation);
  const std::size_t n = r.table.size();
  if (n >= 2) {
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
      A(i, 0) = std::log(std::log(double(r.table[i].first)));
      A(i, 1) = 1;
      y(i) = r.table[i].second;
    }
    Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    r.slope = c(0);
    r.intercept = c(1);
    double ss = (y.array() - y.mean()).square().sum();
    double res = (A * c - y).squaredNorm();
    r.r2 = ss > 0 ? 1 - res / ss : 0;
  }
  return r;
}

FemEscalation fem_escalation(double s, double p, const FemOptions& o) {
  if (o.levels.size() < 2) throw InvalidArgument("fem_escalation: need at least two levels");
  FemEscalation out;
  std::vector<MeshField> fields;
  for (int level : o.levels) {
    CuspMesh cm = make_cusp_mesh(s, level);
    auto mesh = std::make_shared<const TriMesh>(std::move(cm.mesh));
    int n = o.slice_base << level;
    CircleMap phi = cusp_slice_map(cm.cusp, p, PowerSequence{}, n);
    fields.push_back(p_harmonic_extend(phi, mesh, p, o.solver));
    out.slices.push_back(n);
  }
  out.energy = sobolev_energy(fields, p, o.escalation);
  out.escalates = out.energy.divergent;
  const auto& h = out.energy.history;
  out.stabilizes = std::abs(h.back().second / h[h.size() - 2].second - 1) < o.stable;
  return out;
}

}  // namespace sobex
