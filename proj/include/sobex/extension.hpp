#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sobex/boundary_maps.hpp"
#include "sobex/mesh.hpp"

namespace sobex {

/// Boundary function on the unit circle, theta -> psi(e^{i theta}).
struct Trace {
  std::function<Complex(double)> value;
  std::function<Complex(double)> derivative;  ///< d psi / d theta
  std::vector<double> breakpoints;            ///< where psi is not smooth, in [0, 2pi)

  static Trace from_map(const CircleMap& f);
  /// psi(theta) = e^{i k theta}
  static Trace monomial(int k);
};

using MeshPtr = std::shared_ptr<const TriMesh>;

struct SolveReport {
  int iterations = 0;
  double residual = 0;                ///< force-normalized first-order residual
  /// regularized energy of each coordinate after each accepted step
  std::array<std::vector<double>, 2> energy_history;
};

/// Planar field on a mesh: nodal values and per-element gradients
/// (row 0 = (u_x, u_y), row 1 = (v_x, v_y)).
struct MeshField {
  MeshPtr mesh;
  Eigen::Matrix2Xd values;
  std::vector<Eigen::Matrix2d> gradients;
  std::optional<CircleMap> boundary_trace;
  SolveReport report;

  MeshField(MeshPtr mesh, Eigen::Matrix2Xd values);
  void update_gradients();
  /// det of the element gradient
  double jacobian(Eigen::Index e) const { return gradients[e].determinant(); }
};

/// Nodal interpolation of f.
MeshField interpolate(MeshPtr mesh, const std::function<Point(const Point&)>& f);

/// Boundary-loop values of a map on the mesh boundary (2 x boundary count).
Eigen::Matrix2Xd boundary_values(const TriMesh& mesh, const CircleMap& f);
Eigen::Matrix2Xd boundary_values(const TriMesh& mesh, const Trace& psi);

/// (1/2pi) int P(z, e^{it}) psi(t) dt with the standard Poisson kernel.
Complex poisson_extend(const Trace& psi, Complex z);
inline Complex poisson_extend(const CircleMap& f, Complex z) { return poisson_extend(Trace::from_map(f), z); }

/// (H_z, H_zbar) of the Poisson extension.
std::pair<Complex, Complex> poisson_derivative(const Trace& psi, Complex z);

/// Boundary mean (1/2pi) int psi dt with the same panel rule.
Complex boundary_mean(const Trace& psi);

/// Poisson extension evaluated at every node of a disk mesh.
MeshField poisson_field(MeshPtr disk_mesh, const Trace& psi);

struct PHarmonicOptions {
  double tol = 1e-8;        ///< force-normalized residual at the final regularization
  double mu_start = 1e-1;   ///< relative to the mean boundary-value gradient scale
  double mu_min = 1e-8;
  double mu_factor = 0.1;
  int max_newton = 60;      ///< per regularization level
};

/// Coordinate-wise minimizer of sum_e area_e (|grad u|^2 + mu^2)^(p/2) with
/// fixed boundary values (2 x boundary count, boundary-loop order).
MeshField p_harmonic_extend(MeshPtr mesh, const Eigen::Matrix2Xd& boundary, double p,
                            const PHarmonicOptions& options = {});
MeshField p_harmonic_extend(const CircleMap& trace, MeshPtr mesh, double p,
                            const PHarmonicOptions& options = {});

/// Regularized p-energy of one coordinate.
double p_energy(const TriMesh& mesh, const Eigen::VectorXd& u, double p, double mu);

/// Radial extension of the constant-speed parametrization of a star-shaped
/// target: G(r e^{i theta}) = c + r (gamma(theta) - c).
class LipschitzTargetMap {
 public:
  LipschitzTargetMap(std::shared_ptr<const JordanDomain> target, Point center);
  Point eval(Complex w) const;
  double lipschitz_bound() const { return bound_; }
  const JordanDomain& target() const { return *target_; }
  const Point& center() const { return center_; }

 private:
  std::shared_ptr<const JordanDomain> target_;
  Point center_;
  double bound_;
};

enum class InnerExtension { harmonic, poisson };

/// h = G o h0 with h0 the extension of gamma^-1 o phi into the disk.
MeshField composed_extension(const CircleMap& phi, MeshPtr mesh, const LipschitzTargetMap& G,
                             InnerExtension inner = InnerExtension::harmonic);

struct HomeomorphyReport {
  double jacobian_sign_fraction = 0;
  std::size_t injectivity_violations = 0;
};

HomeomorphyReport homeomorphy_check(const MeshField& field);

}  // namespace sobex
