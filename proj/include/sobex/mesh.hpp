#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sobex/boundary_maps.hpp"
#include "sobex/geometry.hpp"

namespace sobex {

/// Conforming P1 triangulation of a Jordan domain. Triangles are
/// counterclockwise; the boundary loop follows the domain boundary
/// counterclockwise starting at (or just after) its vertex 0.
struct TriMesh {
  Eigen::Matrix2Xd nodes;
  Eigen::Matrix3Xi tris;
  std::vector<int> boundary;            ///< boundary loop node ids
  std::vector<double> boundary_theta;   ///< source constant-speed parameter per loop node
  std::vector<char> on_boundary;        ///< per node
  CurvePtr source;
  int level = 0;

  Eigen::VectorXd areas;                        ///< per element
  std::vector<Eigen::Matrix<double, 2, 3>> grad;  ///< per element: nodal values -> gradient

  Eigen::Index node_count() const { return nodes.cols(); }
  Eigen::Index element_count() const { return tris.cols(); }
  /// Computes areas, gradient operators, boundary flags and parameters.
  void finalize();
  double total_area() const { return areas.sum(); }
  /// Longest edge.
  double max_edge() const;
};

/// Rings r = j/n, j = 0..n = 2^level, ring j with 6j nodes; boundary on the unit circle.
TriMesh make_disk_mesh(int level);

/// Fan from `center` to each edge of a star-shaped polygon, each fan triangle
/// split uniformly into 4^level pieces.
TriMesh make_polygon_mesh(const JordanDomain& polygon, const Point& center, int level);

struct CuspMesh {
  CuspDomain cusp;
  TriMesh mesh;
};

/// Structured mesh of the cusp domain: rows at the graph vertex heights with
/// 2^(level+2) columns x = xi y^(1/s), a fan at the tip and a polar half-disk
/// cap. Branch resolution 16 * 2^level, depth as given.
CuspMesh make_cusp_mesh(double s, int level, double depth = 1e-12);

}  // namespace sobex
