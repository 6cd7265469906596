#include "sobex/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>

#include "sobex/parallel.hpp"
#include "sobex/quadrature.hpp"

namespace sobex {

namespace {

constexpr int kPanelOrder = 16;
constexpr double kMaxPanel = 0.25;

/// Panel cuts on [c - pi, c + pi]: breakpoints, geometric grading toward c at
/// scale delta (delta <= 0 disables), and a maximal panel length.
std::vector<double> panel_cuts(const std::vector<double>& breaks, double c, double delta) {
  std::vector<double> cuts{c - kPi, c + kPi};
  for (double b : breaks) {
    double x = b - std::floor((b - (c - kPi)) / kTwoPi) * kTwoPi;
    if (x > c - kPi && x < c + kPi) cuts.push_back(x);
  }
  if (delta > 0) {
    cuts.push_back(c);
    for (double h = delta; h < kPi; h *= 2) {
      cuts.push_back(c - h);
      cuts.push_back(c + h);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (double x : cuts) {
    if (!out.empty() && x - out.back() < 1e-15) continue;
    if (!out.empty()) {
      int pieces = static_cast<int>(std::ceil((x - out.back()) / kMaxPanel));
      double a = out.back();
      for (int k = 1; k < pieces; ++k) out.push_back(a + (x - a) * k / pieces);
    }
    out.push_back(x);
  }
  return out;
}

template <typename F>
Complex panel_integral(const std::vector<double>& cuts, F&& f) {
  const auto& rule = quad::gauss_legendre(kPanelOrder);
  Complex sum = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1], h = 0.5 * (b - a), m = 0.5 * (a + b);
    Complex part = 0;
    for (int k = 0; k < kPanelOrder; ++k) part += rule.weights(k) * f(m + h * rule.nodes(k));
    sum += h * part;
  }
  return sum;
}

void require_open_disk(Complex z, const char* who) {
  if (!(std::abs(z) < 1)) throw InvalidArgument(std::string(who) + ": |z| must be < 1");
}

struct Dofs {
  std::vector<int> index;  // node -> interior dof or -1
  int count = 0;
};

Dofs interior_dofs(const TriMesh& m) {
  Dofs d;
  d.index.assign(m.node_count(), -1);
  for (Eigen::Index i = 0; i < m.node_count(); ++i)
    if (!m.on_boundary[i]) d.index[i] = d.count++;
  return d;
}

/// Sparse interior-interior matrix whose pattern is fixed; slots map element
/// entries (9 per element) into the value array.
struct Pattern {
  Eigen::SparseMatrix<double> A;
  std::vector<int> slot;
};

Pattern make_pattern(const TriMesh& m, const Dofs& d) {
  std::vector<Eigen::Triplet<double>> t;
  const Eigen::Index ne = m.element_count();
  for (Eigen::Index e = 0; e < ne; ++e)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        int i = d.index[m.tris(a, e)], j = d.index[m.tris(b, e)];
        if (i >= 0 && j >= 0) t.emplace_back(i, j, 1.0);
      }
  Pattern p;
  p.A.resize(d.count, d.count);
  p.A.setFromTriplets(t.begin(), t.end());
  p.A.makeCompressed();
  p.slot.assign(9 * ne, -1);
  const int* outer = p.A.outerIndexPtr();
  const int* inner = p.A.innerIndexPtr();
  for (Eigen::Index e = 0; e < ne; ++e)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        int i = d.index[m.tris(a, e)], j = d.index[m.tris(b, e)];
        if (i < 0 || j < 0) continue;
        const int* lo = inner + outer[j];
        const int* hi = inner + outer[j + 1];
        p.slot[9 * e + 3 * a + b] = static_cast<int>(std::lower_bound(lo, hi, i) - inner);
      }
  return p;
}

struct Local {
  std::vector<double> energy;
  std::vector<Eigen::Vector3d> grad;
  std::vector<Eigen::Matrix3d> hess;
};

void local_terms(const TriMesh& m, const Eigen::VectorXd& u, double p, double mu, Local& out,
                 bool with_hessian) {
  const Eigen::Index ne = m.element_count();
  out.energy.resize(ne);
  out.grad.resize(ne);
  if (with_hessian) out.hess.resize(ne);
  parallel_for(ne, [&](std::size_t e) {
    Eigen::Vector3d ue(u(m.tris(0, e)), u(m.tris(1, e)), u(m.tris(2, e)));
    const auto& G = m.grad[e];
    Eigen::Vector2d g = G * ue;
    double s = g.squaredNorm() + mu * mu;
    double A = m.areas(e);
    out.energy[e] = A * std::pow(s, 0.5 * p);
    Eigen::Vector3d gt = G.transpose() * g;
    double w1 = A * p * std::pow(s, 0.5 * p - 1);
    out.grad[e] = w1 * gt;
    if (with_hessian) {
      double w2 = A * p * (p - 2) * std::pow(s, 0.5 * p - 2);
      out.hess[e] = w1 * G.transpose() * G + w2 * gt * gt.transpose();
    }
  });
}

double energy_of(const TriMesh& m, const Eigen::VectorXd& u, double p, double mu) {
  return parallel_sum(m.element_count(), [&](std::size_t e) {
    Eigen::Vector3d ue(u(m.tris(0, e)), u(m.tris(1, e)), u(m.tris(2, e)));
    Eigen::Vector2d g = m.grad[e] * ue;
    return m.areas(e) * std::pow(g.squaredNorm() + mu * mu, 0.5 * p);
  });
}

/// Harmonic solve for one coordinate with the given boundary nodal values.
Eigen::VectorXd harmonic_solve(const TriMesh& m, const Dofs& d, Pattern& pat,
                               const Eigen::VectorXd& fixed) {
  const Eigen::Index ne = m.element_count();
  std::fill(pat.A.valuePtr(), pat.A.valuePtr() + pat.A.nonZeros(), 0.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d.count);
  for (Eigen::Index e = 0; e < ne; ++e) {
    Eigen::Matrix3d K = m.areas(e) * m.grad[e].transpose() * m.grad[e];
    for (int a = 0; a < 3; ++a) {
      int i = d.index[m.tris(a, e)];
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        int s = pat.slot[9 * e + 3 * a + b];
        if (s >= 0) pat.A.valuePtr()[s] += K(a, b);
        else rhs(i) -= K(a, b) * fixed(m.tris(b, e));
      }
    }
  }
  Eigen::VectorXd u = fixed;
  if (d.count == 0) return u;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(pat.A);
  if (solver.info() != Eigen::Success) throw NonConvergence("harmonic solve: factorization failed", INFINITY);
  Eigen::VectorXd x = solver.solve(rhs);
  for (Eigen::Index n = 0; n < m.node_count(); ++n)
    if (d.index[n] >= 0) u(n) = x(d.index[n]);
  return u;
}

/// max_i |g_i| / n_i with n_i the sum of |element forces| at i, floored at
/// 1e-6 of the largest such sum; nodes whose |g_i| is within the force change
/// of 64 ulps of u are at the rounding floor and skipped.
double force_residual(const Eigen::VectorXd& g, const Eigen::VectorXd& force, const Eigen::VectorXd& hdiag,
                      double umax) {
  if (force.size() == 0) return 0;
  const double floor = 1e-6 * force.maxCoeff();
  const double eps = 64 * std::numeric_limits<double>::epsilon() * umax;
  double r = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (force(i) > 0 && std::abs(g(i)) > eps * hdiag(i)) r = std::max(r, std::abs(g(i)) / std::max(force(i), floor));
  return r;
}

double residual_at(const TriMesh& m, const Dofs& d, const Eigen::VectorXd& u, double p, double mu,
                   Local& loc) {
  local_terms(m, u, p, mu, loc, true);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d.count), force = g, hdiag = g;
  for (Eigen::Index e = 0; e < m.element_count(); ++e)
    for (int a = 0; a < 3; ++a) {
      int i = d.index[m.tris(a, e)];
      if (i < 0) continue;
      g(i) += loc.grad[e](a);
      force(i) += std::abs(loc.grad[e](a));
      hdiag(i) += loc.hess[e](a, a);
    }
  return force_residual(g, force, hdiag, u.cwiseAbs().maxCoeff());
}

/// Newton with regularization continuation; returns the final residual.
double p_solve(const TriMesh& m, const Dofs& d, Pattern& pat, Eigen::VectorXd& u, double p,
               const PHarmonicOptions& opt, std::vector<double>& history, int& iterations) {
  const Eigen::Index ne = m.element_count();
  double area = m.total_area();
  double scale = std::sqrt(energy_of(m, u, 2.0, 0.0) / area);
  if (!(scale > 0)) scale = 1.0;
  std::vector<double> levels;
  for (double mu = opt.mu_start; mu > opt.mu_min * (1 + 1e-12); mu *= opt.mu_factor) levels.push_back(mu);
  levels.push_back(opt.mu_min);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(pat.A);
  Local loc;
  double residual = INFINITY;
  for (std::size_t level = 0; level < levels.size(); ++level) {
    const double mu = levels[level] * scale;
    const bool last = level + 1 == levels.size();
    const double target = last ? opt.tol : std::max(opt.tol, 1e-4);
    double E = energy_of(m, u, p, mu);
    history.push_back(E);
    for (int it = 0; it < opt.max_newton; ++it) {
      local_terms(m, u, p, mu, loc, true);
      Eigen::VectorXd g = Eigen::VectorXd::Zero(d.count), force = g, hdiag = g;
      std::fill(pat.A.valuePtr(), pat.A.valuePtr() + pat.A.nonZeros(), 0.0);
      for (Eigen::Index e = 0; e < ne; ++e) {
        for (int a = 0; a < 3; ++a) {
          int i = d.index[m.tris(a, e)];
          if (i < 0) continue;
          g(i) += loc.grad[e](a);
          force(i) += std::abs(loc.grad[e](a));
          for (int b = 0; b < 3; ++b) {
            int s = pat.slot[9 * e + 3 * a + b];
            if (s >= 0) pat.A.valuePtr()[s] += loc.hess[e](a, b);
          }
          hdiag(i) += loc.hess[e](a, a);
        }
      }
      residual = force_residual(g, force, hdiag, u.cwiseAbs().maxCoeff());
      if (residual < target) break;
      solver.factorize(pat.A);
      if (solver.info() != Eigen::Success) throw NonConvergence("p-harmonic: Hessian factorization failed", residual);
      Eigen::VectorXd step = solver.solve(-g);
      double slope = g.dot(step);
      if (!(slope < 0)) break;
      double alpha = 1.0;
      Eigen::VectorXd trial = u;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        for (Eigen::Index n = 0; n < m.node_count(); ++n)
          if (d.index[n] >= 0) trial(n) = u(n) + alpha * step(d.index[n]);
        double Et = energy_of(m, trial, p, mu);
        bool armijo = Et <= E + 1e-4 * alpha * slope;
        // below energy resolution, fall back to residual decrease
        bool flat = !armijo && std::abs(Et - E) <= 1e-13 * std::abs(E) &&
                    residual_at(m, d, trial, p, mu, loc) < residual;
        if (armijo || flat) {
          u = trial;
          E = Et;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      ++iterations;
      history.push_back(E);
    }
  }
  return residual_at(m, d, u, p, levels.back() * scale, loc);
}

}  // namespace

Trace Trace::from_map(const CircleMap& f) {
  Trace t;
  auto shared = std::make_shared<CircleMap>(f);
  t.value = [shared](double th) { return to_complex(shared->evaluate(th)); };
  t.derivative = [shared](double th) { return to_complex(shared->derivative(th)); };
  t.breakpoints = f.breakpoints();
  return t;
}

Trace Trace::monomial(int k) {
  Trace t;
  t.value = [k](double th) { return std::polar(1.0, k * th); };
  t.derivative = [k](double th) { return Complex(0, k) * std::polar(1.0, k * th); };
  return t;
}

MeshField::MeshField(MeshPtr m, Eigen::Matrix2Xd v) : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh) throw InvalidArgument("MeshField: missing mesh");
  if (values.cols() != mesh->node_count()) throw InvalidArgument("MeshField: value count mismatch");
  update_gradients();
}

void MeshField::update_gradients() {
  const Eigen::Index ne = mesh->element_count();
  gradients.resize(ne);
  parallel_for(ne, [&](std::size_t e) {
    Eigen::Matrix<double, 2, 3> V;
    for (int k = 0; k < 3; ++k) V.col(k) = values.col(mesh->tris(k, e));
    gradients[e] = V * mesh->grad[e].transpose();
  });
}

MeshField interpolate(MeshPtr mesh, const std::function<Point(const Point&)>& f) {
  Eigen::Matrix2Xd v(2, mesh->node_count());
  for (Eigen::Index i = 0; i < mesh->node_count(); ++i) v.col(i) = f(mesh->nodes.col(i));
  return MeshField(std::move(mesh), std::move(v));
}

Eigen::Matrix2Xd boundary_values(const TriMesh& mesh, const CircleMap& f) {
  if (mesh.source && !(f.source().is_unit_circle() && mesh.source->is_unit_circle()) &&
      f.source().vertices() != mesh.source->vertices())
    throw InvalidArgument("boundary_values: map source is not the mesh boundary");
  Eigen::Matrix2Xd b(2, mesh.boundary.size());
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i) b.col(i) = f.evaluate(mesh.boundary_theta[i]);
  return b;
}

Eigen::Matrix2Xd boundary_values(const TriMesh& mesh, const Trace& psi) {
  Eigen::Matrix2Xd b(2, mesh.boundary.size());
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i) b.col(i) = to_point(psi.value(mesh.boundary_theta[i]));
  return b;
}

Complex poisson_extend(const Trace& psi, Complex z) {
  require_open_disk(z, "poisson_extend");
  double r = std::abs(z);
  double c = r > 0 ? std::arg(z) : 0.0;
  auto cuts = panel_cuts(psi.breakpoints, c, r > 0 ? 1 - r : 0.0);
  Complex sum = panel_integral(cuts, [&](double t) {
    double kernel = (1 - r * r) / std::norm(z - std::polar(1.0, t));
    return kernel * psi.value(t);
  });
  return sum / kTwoPi;
}

std::pair<Complex, Complex> poisson_derivative(const Trace& psi, Complex z) {
  require_open_disk(z, "poisson_derivative");
  if (!psi.derivative) throw InvalidArgument("poisson_derivative: trace has no derivative");
  double r = std::abs(z);
  double c = r > 0 ? std::arg(z) : 0.0;
  auto cuts = panel_cuts(psi.breakpoints, c, r > 0 ? 1 - r : 0.0);
  const Complex I(0, 1);
  Complex hz = panel_integral(cuts, [&](double t) { return psi.derivative(t) / (std::polar(1.0, t) - z); });
  Complex hzb =
      panel_integral(cuts, [&](double t) { return std::conj(psi.derivative(t)) / (std::polar(1.0, t) - z); });
  return {hz / (kTwoPi * I), std::conj(hzb / (kTwoPi * I))};
}

Complex boundary_mean(const Trace& psi) {
  auto cuts = panel_cuts(psi.breakpoints, kPi, 0.0);
  return panel_integral(cuts, [&](double t) { return psi.value(t); }) / kTwoPi;
}

MeshField poisson_field(MeshPtr mesh, const Trace& psi) {
  if (!mesh->source || !mesh->source->is_unit_circle())
    throw InvalidArgument("poisson_field: mesh must be a disk mesh");
  Eigen::Matrix2Xd v(2, mesh->node_count());
  parallel_for(mesh->node_count(), [&](std::size_t i) {
    if (!mesh->on_boundary[i]) v.col(i) = to_point(poisson_extend(psi, to_complex(mesh->nodes.col(i))));
  });
  Eigen::Matrix2Xd b = boundary_values(*mesh, psi);
  for (std::size_t i = 0; i < mesh->boundary.size(); ++i) v.col(mesh->boundary[i]) = b.col(i);
  return MeshField(std::move(mesh), std::move(v));
}

double p_energy(const TriMesh& mesh, const Eigen::VectorXd& u, double p, double mu) {
  return energy_of(mesh, u, p, mu);
}

MeshField p_harmonic_extend(MeshPtr mesh, const Eigen::Matrix2Xd& boundary, double p,
                            const PHarmonicOptions& options) {
  if (!(p > 1) || !std::isfinite(p)) throw InvalidArgument("p_harmonic_extend: p must lie in (1, inf)");
  if (boundary.cols() != Eigen::Index(mesh->boundary.size()))
    throw InvalidArgument("p_harmonic_extend: boundary value count mismatch");
  const TriMesh& m = *mesh;
  Dofs d = interior_dofs(m);
  Pattern pat = make_pattern(m, d);
  Eigen::Matrix2Xd values = Eigen::Matrix2Xd::Zero(2, m.node_count());
  SolveReport report;
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(m.node_count());
    for (std::size_t i = 0; i < m.boundary.size(); ++i) fixed(m.boundary[i]) = boundary(c, i);
    Eigen::VectorXd u = harmonic_solve(m, d, pat, fixed);
    if (p != 2.0) {
      double r = p_solve(m, d, pat, u, p, options, report.energy_history[c], report.iterations);
      report.residual = std::max(report.residual, r);
    } else {
      report.energy_history[c].push_back(energy_of(m, u, 2.0, 0.0));
    }
    values.row(c) = u.transpose();
  }
  if (p != 2.0 && report.residual > std::max(options.tol, 1e-6))
    throw NonConvergence("p_harmonic_extend: Newton iteration did not converge", report.residual);
  MeshField f(std::move(mesh), std::move(values));
  f.report = std::move(report);
  return f;
}

MeshField p_harmonic_extend(const CircleMap& trace, MeshPtr mesh, double p, const PHarmonicOptions& options) {
  Eigen::Matrix2Xd b = boundary_values(*mesh, trace);
  MeshField f = p_harmonic_extend(std::move(mesh), b, p, options);
  f.boundary_trace = trace;
  return f;
}

LipschitzTargetMap::LipschitzTargetMap(std::shared_ptr<const JordanDomain> target, Point center)
    : target_(std::move(target)), center_(std::move(center)) {
  if (!target_) throw InvalidArgument("LipschitzTargetMap: missing target");
  if (!target_->contains(center_)) throw InvalidArgument("LipschitzTargetMap: center is not interior");
  const auto& v = target_->boundary().vertices();
  double rmax = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    Point a = v[i] - center_, b = v[i + 1] - center_;
    if (!(a.x() * b.y() - a.y() * b.x() > 0))
      throw InvalidArgument("LipschitzTargetMap: target is not star-shaped with respect to the center");
    rmax = std::max(rmax, a.norm());
  }
  double speed = target_->boundary().is_unit_circle() ? 1.0 : target_->boundary().length() / kTwoPi;
  bound_ = std::hypot(rmax, speed);
}

Point LipschitzTargetMap::eval(Complex w) const {
  double r = std::abs(w);
  if (r > 1 + 1e-12) throw InvalidArgument("LipschitzTargetMap: point outside the closed disk");
  if (r == 0) return center_;
  return center_ + r * (target_->boundary().at_angle(std::arg(w)) - center_);
}

MeshField composed_extension(const CircleMap& phi, MeshPtr mesh, const LipschitzTargetMap& G,
                             InnerExtension inner) {
  const JordanCurve& tgt = G.target().boundary();
  if (!tgt.rectifiable()) throw InvalidArgument("composed_extension: target boundary is not rectifiable");
  if (!(phi.target().vertices() == tgt.vertices()))
    throw InvalidArgument("composed_extension: map target is not the boundary of G's target");
  CircleMap phi0 = phi.retarget(unit_circle_ptr());
  Eigen::Matrix2Xd h0;
  if (inner == InnerExtension::poisson) {
    h0 = poisson_field(mesh, Trace::from_map(phi0)).values;
  } else {
    h0 = p_harmonic_extend(phi0, mesh, 2.0).values;
  }
  Eigen::Matrix2Xd v(2, mesh->node_count());
  parallel_for(mesh->node_count(), [&](std::size_t i) { v.col(i) = G.eval(to_complex(h0.col(i))); });
  for (std::size_t i = 0; i < mesh->boundary.size(); ++i)
    v.col(mesh->boundary[i]) = phi.evaluate(mesh->boundary_theta[i]);
  MeshField f(std::move(mesh), std::move(v));
  f.boundary_trace = phi;
  return f;
}

HomeomorphyReport homeomorphy_check(const MeshField& field) {
  const TriMesh& m = *field.mesh;
  HomeomorphyReport r;
  const Eigen::Index ne = m.element_count();
  std::size_t positive = 0;
  for (Eigen::Index e = 0; e < ne; ++e) positive += field.jacobian(e) > 0;
  r.jacobian_sign_fraction = ne ? double(positive) / ne : 1.0;

  std::vector<std::pair<int, int>> edges;
  for (Eigen::Index e = 0; e < ne; ++e)
    for (int k = 0; k < 3; ++k) {
      int a = m.tris(k, e), b = m.tris((k + 1) % 3, e);
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<Point> a(edges.size()), b(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    a[i] = field.values.col(edges[i].first);
    b[i] = field.values.col(edges[i].second);
  }
  SegmentIndex index(std::move(a), std::move(b));
  auto share = [&](std::size_t i, std::size_t j) {
    return edges[i].first == edges[j].first || edges[i].first == edges[j].second ||
           edges[i].second == edges[j].first || edges[i].second == edges[j].second;
  };
  r.injectivity_violations = index.intersecting_pairs(share).size();
  return r;
}

}  // namespace sobex
