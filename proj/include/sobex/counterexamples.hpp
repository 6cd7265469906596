#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sobex/boundary_maps.hpp"
#include "sobex/energy.hpp"
#include "sobex/extension.hpp"
#include "sobex/mesh.hpp"

namespace sobex {

/// Axis-aligned box [x0, x1] x [y0, y1] intersected with the domain.
struct Slice {
  double x0, x1, y0, y1;
  double height;  ///< eps_k (normalized) or h_k
  double width;   ///< widest horizontal extent inside the domain
  double d;       ///< required image separation of the two ends
};

struct SliceFamily {
  std::string kind;  ///< "cusp" or "spiral"
  std::vector<Slice> slices;
  double area(std::size_t k) const;  ///< nominal area of slice k inside the domain
  double s = 0;                      ///< cusp exponent
};

/// S_k = {y_k < y < y_(k-1)} of X_s with y_k as in cusp_boundary_map.
SliceFamily cusp_slices(const CuspDomain& cusp, double p, const PowerSequence& eps, int n);
/// R_k interiors of the spiral domain.
SliceFamily spiral_slices(const SpiralDomain& spiral, const std::vector<double>& d);

/// Pairwise disjoint, nonempty, inside the domain (sampled).
void validate(const SliceFamily& family, const JordanDomain& domain);

double spiral_h(double k);
double spiral_d(double k);
double cusp_d(double k, double p);

/// sum_{k <= N} h_k d_k.
double spiral_lower_bound(std::int64_t n, const std::function<double(double)>& h = spiral_h,
                          const std::function<double(double)>& d = spiral_d);
/// sum_{k <= N} d_k^p eps_k / sum_{j >= k} eps_j; d empty = (log(1+k))^(-1/p).
double cusp_lower_bound(std::int64_t n, double p, const PowerSequence& eps = {},
                        const std::function<double(double)>& d = {});

struct SliceBound {
  double measured = 0;    ///< int_S |DH|^p
  double l1 = 0;          ///< int_S |DH|
  double area = 0;        ///< mesh area inside S
  double holder = 0;      ///< l1^p / area^(p-1)
  double separation = 0;  ///< d * height
};

/// Exact clipping of each element to each slice; |DH| is the Frobenius norm.
std::vector<SliceBound> slice_energy_bound(const MeshField& field, const SliceFamily& family, double p);

struct DivergenceReport {
  std::vector<std::pair<std::int64_t, double>> table;
  bool certificate = false;
  double escalation = 1.01;
  /// least squares value ~ slope * log log N + intercept
  double slope = 0, intercept = 0, r2 = 0;
};

DivergenceReport divergence_certificate(const std::function<double(std::int64_t)>& bound,
                                        const std::vector<std::int64_t>& levels, double escalation = 1.01);

struct FemOptions {
  std::vector<int> levels{1, 2, 3, 4, 5};
  /// slices at mesh level l: base << l
  int slice_base = 4;
  double escalation = 1.1;
  double stable = 0.05;
  PHarmonicOptions solver;
};

struct FemEscalation {
  EnergyReport energy;       ///< sobolev_energy over the mesh levels
  bool escalates = false;    ///< every level >= escalation x previous
  bool stabilizes = false;   ///< last successive change < stable
  std::vector<int> slices;   ///< slice count per level
};

/// p-harmonic extensions of the cusp slice map on X_s across mesh levels.
FemEscalation fem_escalation(double s, double p, const FemOptions& options = {});

}  // namespace sobex
