#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sobex/types.hpp"

namespace sobex {

/// Axis-aligned rectangle.
struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};

  static Box around(const std::vector<Point>& pts);
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Point& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
  /// Euclidean distance from p to the box (0 inside).
  double distance(const Point& p) const;
};

/// Squared distance from p to the segment [a, b].
double segment_distance_sq(const Point& p, const Point& a, const Point& b);

/// True if closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);

/// Bounding-volume hierarchy over a set of segments: nearest-segment queries,
/// horizontal ray candidate lookup and pairwise intersection sweeps.
class SegmentIndex {
 public:
  SegmentIndex(std::vector<Point> a, std::vector<Point> b);

  std::size_t size() const { return a_.size(); }
  const Point& start(std::size_t i) const { return a_[i]; }
  const Point& end(std::size_t i) const { return b_[i]; }

  /// Nearest segment to p as (index, distance).
  std::pair<std::size_t, double> nearest(const Point& p) const;

  /// Segments whose bounding boxes meet the ray {(x, y): x >= p.x, y = p.y}.
  std::vector<std::size_t> ray_candidates(const Point& p) const;

  /// All unordered pairs (i, j), i < j, of intersecting segments for which
  /// skip(i, j) is false. Sorted.
  std::vector<std::pair<std::size_t, std::size_t>> intersecting_pairs(
      const std::function<bool(std::size_t, std::size_t)>& skip) const;

 private:
  struct Node {
    Box box;
    int left = -1, right = -1;  // children, -1 for leaves
    std::size_t begin = 0, end = 0;
  };
  int build(std::size_t begin, std::size_t end);
  void pairs(int u, int v, const std::function<bool(std::size_t, std::size_t)>& skip,
             std::vector<std::pair<std::size_t, std::size_t>>& out) const;

  std::vector<Point> a_, b_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

/// Closed simple polyline. vertices().front() == vertices().back().
///
/// Curves tagged "circle" (the unit circle) evaluate their constant-speed
/// parametrization analytically; every other curve interpolates the polyline.
class JordanCurve {
 public:
  /// Validates closedness (closing the list if needed), drops repeated
  /// vertices, and rejects self-intersecting input.
  explicit JordanCurve(std::vector<Point> vertices, std::optional<std::string> analytic_tag = {},
                       bool rectifiable = true);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<double>& cumulative_arclength() const { return cumulative_; }
  const std::optional<std::string>& analytic_tag() const { return tag_; }
  /// False for truncations of curves of infinite length (the spiral family).
  bool rectifiable() const { return rectifiable_; }
  std::size_t segment_count() const { return vertices_.size() - 1; }
  double length() const { return cumulative_.back(); }
  double signed_area() const;
  Box bounding_box() const { return Box::around(vertices_); }
  const SegmentIndex& index() const { return *index_; }

  /// Point at arclength s (taken modulo the length).
  Point at_arclength(double s) const;
  /// Arclength of the point of the curve nearest to p.
  double arclength_of(const Point& p) const;

  /// Constant-speed parametrization: theta in [0, 2pi) to the point at
  /// arclength L*theta/(2pi) from vertex 0.
  Point at_angle(double theta) const;
  /// Unit-speed-in-theta tangent, |d/dtheta| = L/2pi.
  Point tangent_at_angle(double theta) const;
  /// Inverse of at_angle for points on the curve, in [0, 2pi).
  double angle_of(const Point& p) const;

  bool is_unit_circle() const { return tag_ && *tag_ == "circle"; }

 private:
  std::vector<Point> vertices_;
  std::vector<double> cumulative_;
  std::optional<std::string> tag_;
  bool rectifiable_ = true;
  std::shared_ptr<const SegmentIndex> index_;
};

/// Total polyline length of a curve.
inline double arc_length(const JordanCurve& c) { return c.length(); }

/// Bounded open Jordan domain with a counterclockwise boundary.
class JordanDomain {
 public:
  /// Reorients the boundary counterclockwise; throws unless the witness is
  /// strictly inside.
  JordanDomain(JordanCurve boundary, Point witness);

  const JordanCurve& boundary() const { return *boundary_; }
  std::shared_ptr<const JordanCurve> boundary_ptr() const { return boundary_; }
  const Point& witness() const { return witness_; }
  Box bounding_box() const { return box_; }
  double diameter() const;

  /// Crossing-number interiority; boundary points are outside.
  bool contains(const Point& z) const;
  double dist_to_boundary(const Point& z) const;

 private:
  std::shared_ptr<const JordanCurve> boundary_;
  Point witness_;
  Box box_;
};

/// Polyline unit circle with `resolution` vertices, starting at 1.
JordanCurve make_unit_circle(int resolution = 4096);
JordanDomain make_unit_disk(int resolution = 4096);
/// Unit square [0,1]^2, vertex 0 at the origin.
JordanDomain make_unit_square();
/// Regular polygon inscribed in the unit circle, vertex 0 at angle `phase`.
JordanDomain make_regular_polygon(int sides, double phase = kPi / 2);
/// L-shaped hexagon [0,2]x[0,1] union [0,1]x[0,2].
JordanDomain make_l_shape();

/// Cusp domain bounded by {y = |x|^s, |x| <= 1} and the upper half of
/// |z - i| = 1.
struct CuspDomain {
  JordanDomain domain;
  double s;
  /// Vertices of the right graph branch from the origin up to (1, 1).
  std::vector<Point> right_branch;
  /// Vertices of the cap arc from (1, 1) to (-1, 1), counterclockwise.
  std::vector<Point> cap_arc;
};

struct CuspOptions {
  int resolution = 512;     ///< graph vertices per branch (before densification)
  double depth = 1e-12;     ///< smallest positive graph height
  int cap_segments = 0;     ///< segments on the cap arc; 0 picks resolution/2
};

/// Vertex 0 is the cusp point (0,0); branch heights are geometric in
/// [depth, 1] and then densified so no branch segment exceeds 2/resolution.
CuspDomain make_cusp_domain(double s, const CuspOptions& options = {});
inline CuspDomain make_cusp_domain(double s, int resolution) {
  CuspOptions o;
  o.resolution = resolution;
  return make_cusp_domain(s, o);
}

/// Truncated spiral of rectangles R_k = [a_k, a_k + w_k] x [0, h_k] joined by
/// nested rectangular loops. Traversal order: bottom of R_1, right sides of
/// R_1..R_N (with loop inner banks between), top of R_N, left sides of
/// R_N..R_1 (with loop outer banks between).
struct SpiralDomain {
  JordanDomain domain;
  std::vector<double> widths, heights, gaps;
  std::vector<double> left_x;  ///< a_k
  /// Arclength intervals [from, to] of the right and left sides of each R_k,
  /// in boundary traversal order.
  std::vector<std::pair<double, double>> right_sides, left_sides;
  std::pair<double, double> end_cap;    ///< top of R_N
  std::pair<double, double> start_cap;  ///< bottom of R_1 (starts at arclength 0)
};

SpiralDomain make_spiral_domain(int n, const std::vector<double>& widths,
                                const std::vector<double>& heights,
                                const std::vector<double>& gaps);
/// Defaults w_k = 2^-k, h_k = 1/k, gaps g_k = 2^-(k+2).
SpiralDomain make_spiral_domain(int n);

/// Target of the map -(-log((1-z)/3))^(-tau): the trace theta -> Phi(e^{i theta})
/// on `resolution` nodes graded toward theta = 0, whose limit point 0 is vertex 0.
JordanDomain make_target_ytau(double tau, int resolution = 4096);

}  // namespace sobex
