#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "sobex/energy.hpp"
#include "sobex/geometry.hpp"

namespace sobex {

/// Cell sizes follow min(floor, kappa * dist) down to delta; with a focus
/// path, cells farther than focus_width cell sizes from it stop at coarse.
struct QhOptions {
  double delta = 1.0 / 512;
  double kappa = 0.125;
  std::vector<Point> focus;
  double focus_width = 4;
  double coarse = 1.0 / 64;
};

/// Quadtree lattice of the domain: nodes are leaf centers with
/// dist > spacing / 2, joined along a 16-neighbor stencil with weight
/// length / dist(midpoint). Path lengths are summed in fixed point (2^-40),
/// so shortest-path values are exact and order independent.
struct QhGrid {
  std::shared_ptr<const JordanDomain> domain;
  QhOptions options;
  Eigen::Matrix2Xd nodes;
  std::vector<double> spacing, boundary_dist;
  std::vector<int> offsets, targets;  ///< CSR adjacency
  std::vector<std::int64_t> weights;  ///< fixed point
  int source = -1;
  std::vector<double> distance;       ///< from source

  int node_count() const { return static_cast<int>(spacing.size()); }
  /// Node whose cell contains p, or -1.
  int locate(const Point& p) const;
  /// Exact fixed-point shortest-path values from a node (-1 if unreachable).
  std::vector<std::int64_t> shortest_fixed(int from) const;
  std::vector<double> shortest_from(int from) const;

  struct Cell {
    double cx, cy, h;
    int child = -1;
    int node = -1;
  };
  std::vector<Cell> cells;
};

constexpr double kQhQuantum = 1.0 / (1LL << 40);

QhGrid make_qh_grid(std::shared_ptr<const JordanDomain> domain, const Point& x0, const QhOptions& options = {});

/// Shortest-path value from the grid source to the node containing x.
double qh_distance(const QhGrid& grid, const Point& x);

/// log(1 / (1 - |z|^2)).
double disk_hyperbolic(Complex z);

struct GrowthFit {
  std::vector<std::pair<double, double>> samples;  ///< (qh distance, boundary distance)
  double slope = 0, intercept = 0, r2 = 0;
  int grid_nodes = 0;
};

/// Points on the segment from -> to whose boundary distances equal the given
/// values (bisection on dist along the segment).
std::vector<Point> approach_samples(const JordanDomain& domain, const Point& from, const Point& to,
                                    const std::vector<double>& distances);

/// Least-squares fit of log h(x0, x) against log(1 / dist(x)); samples with
/// dist >= 0.1 diam are dropped. Without a focus path the grid is refined
/// along x0 -> samples.
GrowthFit growth_exponent(std::shared_ptr<const JordanDomain> domain, const Point& x0,
                          const std::vector<Point>& approach, QhOptions options = {});

struct MocOptions {
  int directions = 64;
  int halvings = 8;
  double escalation = 1.05;
  std::function<bool(Complex)> inside;  ///< samples outside are skipped; empty = all
};

/// int_delta^r omega(t)^2 / t dt with omega(t) the oscillation over sample
/// points of the circle |w - z| = t; history over delta = delta_min 2^k,
/// k = halvings..0.
EnergyReport moc_integral(const std::function<Complex(Complex)>& f, Complex z, double r, double delta_min,
                          const MocOptions& options = {});

/// Oscillation over the circle samples at radius t.
double moc_oscillation(const std::function<Complex(Complex)>& f, Complex z, double t, const MocOptions& options = {});

}  // namespace sobex
