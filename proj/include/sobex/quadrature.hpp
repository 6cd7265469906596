#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace sobex::quad {

/// Gauss–Legendre rule on [-1, 1].
struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss–Legendre rule, computed by Newton iteration on P_n and cached.
const Rule& gauss_legendre(int n);

/// Nodes/weights mapped to [a, b].
Rule mapped(const Rule& rule, double a, double b);

/// Composite rule on [a, b] whose panels shrink geometrically toward `a`
/// (ratio 1/2, `levels` panels), `order` points per panel. Resolves
/// integrable endpoint singularities at a.
Rule graded_toward_left(double a, double b, int levels, int order);

/// Same, graded toward both endpoints.
Rule graded_both(double a, double b, int levels, int order);

double integrate(const std::function<double(double)>& f, const Rule& rule);

/// Globally adaptive tensor Gauss integration over [x0,x1]×[y0,y1]. The cell
/// with the largest |coarse − fine| estimate is quartered until the summed
/// estimate drops below tol·|integral| or max_cells is reached.
double adaptive_2d(const std::function<double(double, double)>& f, double x0, double x1,
                   double y0, double y1, double tol, int max_cells = 40000);

}  // namespace sobex::quad
