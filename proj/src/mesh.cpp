#include "sobex/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sobex {

namespace {

struct Builder {
  std::vector<Point> nodes;
  std::vector<Eigen::Vector3i> tris;

  int add(const Point& p) {
    nodes.push_back(p);
    return static_cast<int>(nodes.size()) - 1;
  }
  void tri(int a, int b, int c) {
    Point u = nodes[b] - nodes[a], v = nodes[c] - nodes[a];
    double o = u.x() * v.y() - u.y() * v.x();
    if (o < 0) std::swap(b, c);
    tris.emplace_back(a, b, c);
  }
  /// Triangulates the strip between two angular node sequences (inner and
  /// outer), both sorted by increasing angle.
  void strip(const std::vector<int>& in, const std::vector<double>& ain, const std::vector<int>& out,
             const std::vector<double>& aout) {
    std::size_t i = 0, k = 0;
    while (i + 1 < in.size() || k + 1 < out.size()) {
      bool step_out;
      if (i + 1 >= in.size()) step_out = true;
      else if (k + 1 >= out.size()) step_out = false;
      else step_out = aout[k + 1] <= ain[i + 1];
      if (step_out) {
        tri(in[i], out[k], out[k + 1]);
        ++k;
      } else {
        tri(in[i], out[k], in[i + 1]);
        ++i;
      }
    }
  }
  TriMesh finish(std::vector<int> boundary, CurvePtr source, int level) {
    TriMesh m;
    m.nodes.resize(2, nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) m.nodes.col(i) = nodes[i];
    m.tris.resize(3, tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i) m.tris.col(i) = tris[i];
    m.boundary = std::move(boundary);
    m.source = std::move(source);
    m.level = level;
    m.finalize();
    return m;
  }
};

}  // namespace

void TriMesh::finalize() {
  const Eigen::Index ne = tris.cols();
  areas.resize(ne);
  grad.resize(ne);
  for (Eigen::Index e = 0; e < ne; ++e) {
    Point p0 = nodes.col(tris(0, e)), p1 = nodes.col(tris(1, e)), p2 = nodes.col(tris(2, e));
    Eigen::Matrix2d J;
    J.col(0) = p1 - p0;
    J.col(1) = p2 - p0;
    double det = J.determinant();
    if (!(det > 0)) throw InvalidArgument("TriMesh: degenerate or inverted element " + std::to_string(e));
    areas(e) = 0.5 * det;
    Eigen::Matrix<double, 2, 3> ref;
    ref << -1, 1, 0, -1, 0, 1;
    grad[e] = J.inverse().transpose() * ref;
  }
  on_boundary.assign(nodes.cols(), 0);
  boundary_theta.resize(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    on_boundary[boundary[i]] = 1;
    boundary_theta[i] = source ? source->angle_of(nodes.col(boundary[i])) : 0.0;
  }
}

double TriMesh::max_edge() const {
  double h = 0;
  for (Eigen::Index e = 0; e < tris.cols(); ++e)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, (nodes.col(tris(k, e)) - nodes.col(tris((k + 1) % 3, e))).norm());
  return h;
}

TriMesh make_disk_mesh(int level) {
  if (level < 0 || level > 12) throw InvalidArgument("make_disk_mesh: level must lie in [0, 12]");
  const int n = 1 << level;
  Builder b;
  std::vector<int> prev{b.add(Point(0, 0))};
  std::vector<double> prev_angle{0.0};
  for (int j = 1; j <= n; ++j) {
    const int count = 6 * j;
    std::vector<int> ring(count);
    std::vector<double> angle(count);
    for (int i = 0; i < count; ++i) {
      angle[i] = kTwoPi * i / count;
      double r = double(j) / n;
      ring[i] = b.add(j == n ? Point(std::cos(angle[i]), std::sin(angle[i]))
                             : Point(r * std::cos(angle[i]), r * std::sin(angle[i])));
    }
    if (j == 1) {
      for (int i = 0; i < count; ++i) b.tri(prev[0], ring[i], ring[(i + 1) % count]);
    } else {
      // close the periodic strip by repeating the first node one turn later
      std::vector<int> in = prev, out = ring;
      std::vector<double> ain = prev_angle, aout = angle;
      in.push_back(prev.front());
      ain.push_back(kTwoPi);
      out.push_back(ring.front());
      aout.push_back(kTwoPi);
      b.strip(in, ain, out, aout);
    }
    prev = ring;
    prev_angle = angle;
  }
  return b.finish(prev, unit_circle_ptr(), level);
}

TriMesh make_polygon_mesh(const JordanDomain& polygon, const Point& center, int level) {
  if (level < 0 || level > 10) throw InvalidArgument("make_polygon_mesh: level must lie in [0, 10]");
  const auto& v = polygon.boundary().vertices();
  const int sides = static_cast<int>(v.size()) - 1;
  for (int i = 0; i < sides; ++i) {
    Point a = v[i] - center, c = v[i + 1] - center;
    if (!(a.x() * c.y() - a.y() * c.x() > 0))
      throw InvalidArgument("make_polygon_mesh: polygon is not star-shaped with respect to the center");
  }
  const int m = 1 << level;
  Builder b;
  int c0 = b.add(center);
  std::vector<std::vector<int>> spoke(sides, std::vector<int>(m + 1));
  for (int i = 0; i < sides; ++i) {
    spoke[i][0] = c0;
    for (int k = 1; k <= m; ++k) spoke[i][k] = b.add(center + (double(k) / m) * (v[i] - center));
  }
  std::vector<int> boundary;
  for (int f = 0; f < sides; ++f) {
    int g = (f + 1) % sides;
    std::map<std::pair<int, int>, int> ids;
    auto id = [&](int a, int c) {
      if (c == 0) return spoke[f][a];
      if (a == 0) return spoke[g][c];
      auto [it, fresh] = ids.try_emplace({a, c}, -1);
      if (fresh) it->second = b.add(center + (double(a) / m) * (v[f] - center) +
                                    (double(c) / m) * (v[f + 1] - center));
      return it->second;
    };
    for (int a = 0; a < m; ++a)
      for (int c = 0; a + c < m; ++c) {
        b.tri(id(a, c), id(a + 1, c), id(a, c + 1));
        if (a + c + 2 <= m) b.tri(id(a + 1, c), id(a + 1, c + 1), id(a, c + 1));
      }
    for (int c = 0; c < m; ++c) boundary.push_back(id(m - c, c));
  }
  return b.finish(boundary, polygon.boundary_ptr(), level);
}

CuspMesh make_cusp_mesh(double s, int level, double depth) {
  if (level < 0 || level > 8) throw InvalidArgument("make_cusp_mesh: level must lie in [0, 8]");
  const int m = 1 << (level + 2);  // columns, even
  const int half = m / 2;
  CuspOptions opt;
  opt.resolution = 16 << level;
  opt.depth = depth;
  opt.cap_segments = 3 * half;
  CuspDomain cusp = make_cusp_domain(s, opt);
  const auto& branch = cusp.right_branch;
  const int rows = static_cast<int>(branch.size()) - 1;  // branch[1..rows]

  Builder b;
  int tip = b.add(Point(0, 0));
  std::vector<std::vector<int>> row(rows + 1);
  for (int j = 1; j <= rows; ++j) {
    row[j].resize(m + 1);
    for (int i = 0; i <= m; ++i) {
      double xi = -1.0 + 2.0 * i / m;
      Point p(xi * branch[j].x(), branch[j].y());
      if (i == 0) p = Point(-branch[j].x(), branch[j].y());
      if (i == m) p = branch[j];
      row[j][i] = b.add(p);
    }
  }
  for (int i = 0; i < m; ++i) b.tri(tip, row[1][i], row[1][i + 1]);
  for (int j = 1; j < rows; ++j)
    for (int i = 0; i < m; ++i) {
      int a = row[j][i], c = row[j][i + 1], d = row[j + 1][i], e = row[j + 1][i + 1];
      if (i < half) {
        b.tri(a, c, d);
        b.tri(c, e, d);
      } else {
        b.tri(a, c, e);
        b.tri(a, e, d);
      }
    }

  // polar cap around (0, 1); ring q has radius 2q/m and meets the top row at
  // columns half + q and half - q
  const std::vector<int>& top = row[rows];
  const int outer = static_cast<int>(cusp.cap_arc.size()) - 1;
  std::vector<int> prev{top[half]};
  std::vector<double> prev_angle{0.0};
  std::vector<int> outer_ring;
  for (int q = 1; q <= half; ++q) {
    int count = q == half ? outer : std::max(2, (outer * q + half / 2) / half);
    std::vector<int> ring(count + 1);
    std::vector<double> angle(count + 1);
    for (int l = 0; l <= count; ++l) {
      angle[l] = kPi * l / count;
      if (l == 0) ring[l] = top[half + q];
      else if (l == count) ring[l] = top[half - q];
      else if (q == half) ring[l] = b.add(cusp.cap_arc[l]);
      else {
        double r = 2.0 * q / m;
        ring[l] = b.add(Point(r * std::cos(angle[l]), 1.0 + r * std::sin(angle[l])));
      }
    }
    if (q == 1) {
      for (int l = 0; l < count; ++l) b.tri(prev[0], ring[l], ring[l + 1]);
    } else {
      b.strip(prev, prev_angle, ring, angle);
    }
    prev = ring;
    prev_angle = angle;
    if (q == half) outer_ring = ring;
  }

  std::vector<int> boundary{tip};
  for (int j = 1; j <= rows; ++j) boundary.push_back(row[j][m]);
  for (int l = 1; l < outer; ++l) boundary.push_back(outer_ring[l]);
  for (int j = rows; j >= 1; --j) boundary.push_back(row[j][0]);
  TriMesh mesh = b.finish(boundary, cusp.domain.boundary_ptr(), level);
  return CuspMesh{std::move(cusp), std::move(mesh)};
}

}  // namespace sobex
