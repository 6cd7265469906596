#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "sobex/extension.hpp"

using namespace sobex;

namespace {

MeshPtr disk(int level) { return std::make_shared<const TriMesh>(make_disk_mesh(level)); }

// cotangent-weight Laplacian assembled from edge angles, solved with CG
Eigen::Matrix2Xd cotangent_harmonic(const TriMesh& m, const Eigen::Matrix2Xd& boundary) {
  const Eigen::Index n = m.node_count();
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index e = 0; e < m.element_count(); ++e)
    for (int k = 0; k < 3; ++k) {
      int i = m.tris(k, e), j = m.tris((k + 1) % 3, e), o = m.tris((k + 2) % 3, e);
      Eigen::Vector2d a = m.nodes.col(i) - m.nodes.col(o), b = m.nodes.col(j) - m.nodes.col(o);
      double w = 0.5 * a.dot(b) / std::abs(a.x() * b.y() - a.y() * b.x());
      t.emplace_back(i, j, -w);
      t.emplace_back(j, i, -w);
      t.emplace_back(i, i, w);
      t.emplace_back(j, j, w);
    }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  std::vector<int> fixed(n, -1);
  for (std::size_t i = 0; i < m.boundary.size(); ++i) fixed[m.boundary[i]] = static_cast<int>(i);
  std::vector<int> dof(n, -1);
  int count = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (fixed[i] < 0) dof[i] = count++;
  Eigen::Matrix2Xd out(2, n);
  for (int c = 0; c < 2; ++c) {
    std::vector<Eigen::Triplet<double>> ti;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
    for (int k = 0; k < L.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(L, k); it; ++it) {
        int r = dof[it.row()];
        if (r < 0) continue;
        if (dof[it.col()] >= 0) ti.emplace_back(r, dof[it.col()], it.value());
        else rhs(r) -= it.value() * boundary(c, fixed[it.col()]);
      }
    Eigen::SparseMatrix<double> A(count, count);
    A.setFromTriplets(ti.begin(), ti.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(A);
    cg.setTolerance(1e-13);
    Eigen::VectorXd x = cg.solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) out(c, i) = dof[i] >= 0 ? x(dof[i]) : boundary(c, fixed[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("Poisson extension of monomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k : {0, 1, 2, 3, -2}) {
    Trace psi = Trace::monomial(k);
    double err = 0;
    for (int i = 0; i < 200; ++i) {
      Complex z = std::polar(0.9999 * std::sqrt(U(rng)), kTwoPi * U(rng));
      Complex exact = k >= 0 ? std::pow(z, k) : std::pow(std::conj(z), -k);
      err = std::max(err, std::abs(poisson_extend(psi, z) - exact));
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("Poisson derivative of monomials") {
  Complex z(0.3, -0.85);
  auto [hz, hzb] = poisson_derivative(Trace::monomial(3), z);
  CHECK(std::abs(hz - 3.0 * z * z) < 1e-10);
  CHECK(std::abs(hzb) < 1e-10);
  auto [gz, gzb] = poisson_derivative(Trace::monomial(-2), z);
  CHECK(std::abs(gz) < 1e-10);
  CHECK(std::abs(gzb - 2.0 * std::conj(z)) < 1e-10);
}

TEST_CASE("Poisson derivative matches finite differences for a piecewise-linear map") {
  CircleMap f = random_monotone_map(11, 9, unit_circle_ptr(), unit_circle_ptr());
  Trace psi = Trace::from_map(f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 20; ++i) {
    Complex z = std::polar(0.95 * std::sqrt(U(rng)), kTwoPi * U(rng));
    const double h = 1e-5;
    Complex dx = (poisson_extend(psi, z + h) - poisson_extend(psi, z - h)) / (2 * h);
    Complex dy = (poisson_extend(psi, z + Complex(0, h)) - poisson_extend(psi, z - Complex(0, h))) / (2 * h);
    auto [hz, hzb] = poisson_derivative(psi, z);
    CHECK(std::abs(hz + hzb - dx) < 1e-6 * (1 + std::abs(dx)));
    CHECK(std::abs(Complex(0, 1) * (hz - hzb) - dy) < 1e-6 * (1 + std::abs(dy)));
  }
}

TEST_CASE("mean value property") {
  CircleMap f = random_monotone_map(5, 12, unit_circle_ptr(), unit_circle_ptr());
  Trace psi = Trace::from_map(f);
  CHECK(std::abs(poisson_extend(psi, 0) - boundary_mean(psi)) < 1e-12);
  CHECK(std::abs(boundary_mean(Trace::from_map(CircleMap::rotation(0.4)))) < 1e-12);
  CHECK_THROWS_AS(poisson_extend(psi, Complex(1, 0)), InvalidArgument);
}

TEST_CASE("linear maps are p-harmonic") {
  auto m = disk(3);
  CircleMap id = CircleMap::identity(unit_circle_ptr());
  for (double p : {2.0, 1.5, 3.0}) {
    MeshField f = p_harmonic_extend(id, m, p);
    CHECK((f.values - m->nodes).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK_THROWS_AS(p_harmonic_extend(id, m, 1.0), InvalidArgument);
}

TEST_CASE("harmonic solve agrees with an independent cotangent assembly") {
  auto m = disk(4);
  CircleMap f = random_monotone_map(21, 10, unit_circle_ptr(), unit_circle_ptr());
  Eigen::Matrix2Xd b = boundary_values(*m, f);
  MeshField h = p_harmonic_extend(m, b, 2.0);
  Eigen::Matrix2Xd ref = cotangent_harmonic(*m, b);
  CHECK((h.values - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("p-harmonic energy decreases and respects the maximum principle") {
  auto m = disk(4);
  CircleMap f = random_monotone_map(2, 10, unit_circle_ptr(), unit_circle_ptr(), 6.0);
  for (double p : {1.5, 3.0}) {
    MeshField u = p_harmonic_extend(f, m, p);
    CHECK(u.report.residual < 1e-6);
    for (const auto& h : u.report.energy_history)
      for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] * (1 + 1e-12));
    Eigen::Matrix2Xd b = boundary_values(*m, f);
    for (int c = 0; c < 2; ++c) {
      CHECK(u.values.row(c).maxCoeff() <= b.row(c).maxCoeff() + 1e-3);
      CHECK(u.values.row(c).minCoeff() >= b.row(c).minCoeff() - 1e-3);
    }
    // a perturbation of the solution raises the p-energy
    Eigen::VectorXd x = u.values.row(0).transpose(), y = x;
    for (Eigen::Index i = 0; i < m->node_count(); ++i)
      if (!m->on_boundary[i]) y(i) += 1e-3 * std::sin(7.0 * i);
    CHECK(p_energy(*m, y, p, 0) > p_energy(*m, x, p, 0));
  }
}

TEST_CASE("composed extension onto a pentagon") {
  auto pent = std::make_shared<const JordanDomain>(make_regular_polygon(5));
  LipschitzTargetMap G(pent, Point(0, 0));
  CHECK(G.lipschitz_bound() > 1);
  CHECK((G.eval(Complex(0, 0)) - Point(0, 0)).norm() == 0);
  CircleMap phi = random_monotone_map(4, 8, unit_circle_ptr(), pent->boundary_ptr());
  double previous = INFINITY;
  for (int level : {3, 4, 5}) {
    auto m = disk(level);
    MeshField h = composed_extension(phi, m, G);
    double trace_err = 0;
    for (std::size_t i = 0; i < m->boundary.size(); ++i)
      trace_err = std::max(trace_err, (h.values.col(m->boundary[i]) - phi.evaluate(m->boundary_theta[i])).norm());
    CHECK(trace_err == 0);
    HomeomorphyReport r = homeomorphy_check(h);
    CHECK(r.jacobian_sign_fraction == 1.0);
    CHECK(r.injectivity_violations == 0);
    MeshField ref = composed_extension(phi, m, G, InnerExtension::poisson);
    double diff = (h.values - ref.values).cwiseAbs().maxCoeff();
    CHECK(diff < previous / 1.5);
    previous = diff;
  }
}

TEST_CASE("non-homeomorphic traces are detected") {
  auto m = disk(4);
  MeshField sq = poisson_field(m, Trace::monomial(2));
  HomeomorphyReport r = homeomorphy_check(sq);
  CHECK(r.jacobian_sign_fraction == doctest::Approx(1.0));
  CHECK(r.injectivity_violations > 0);
  MeshField flip = poisson_field(m, Trace::monomial(-1));
  CHECK(homeomorphy_check(flip).jacobian_sign_fraction == 0.0);
}

TEST_CASE("harmonic extension onto a nonconvex target can fold") {
  auto L = std::make_shared<const JordanDomain>(make_l_shape());
  const auto& v = L->boundary().vertices();
  // find the parameters of the two arm tips: vertices farthest from the reentrant corner
  double best0 = 0, best1 = 0;
  double t0 = 0, t1 = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    double t = L->boundary().angle_of(v[i]);
    double dx = v[i].x(), dy = v[i].y();
    if (dx - dy > best0) best0 = dx - dy, t0 = t;
    if (dy - dx > best1) best1 = dy - dx, t1 = t;
  }
  if (t1 < t0) t1 += kTwoPi;
  // ~45% of circle time parked at each tip
  double w = 0.45 * kTwoPi, gap = 0.05 * kTwoPi;
  std::vector<std::pair<double, double>> knots{
      {0, t0 - 0.01}, {w, t0 + 0.01}, {w + gap, t1 - 0.01}, {2 * w + gap, t1 + 0.01}, {kTwoPi, t0 - 0.01 + kTwoPi}};
  CircleMap phi(knots, unit_circle_ptr(), L->boundary_ptr());
  auto m = disk(4);
  MeshField h = p_harmonic_extend(phi, m, 2.0);
  CHECK(homeomorphy_check(h).jacobian_sign_fraction < 1.0);
}

TEST_CASE("p = 1.5 cusp trace agrees with an independent gradient-descent minimizer") {
  CuspMesh cm = make_cusp_mesh(0.5, 0);
  auto m = std::make_shared<const TriMesh>(cm.mesh);
  CircleMap phi = cusp_boundary_map(cm.cusp, 1.5, PowerSequence{}, 20);
  MeshField u = p_harmonic_extend(phi, m, 1.5);
  Eigen::Matrix2Xd b = boundary_values(*m, phi);
  for (int c = 0; c < 2; ++c) {
    // start from the mean boundary value, Barzilai-Borwein steps on the unregularized energy
    Eigen::VectorXd x = Eigen::VectorXd::Constant(m->node_count(), b.row(c).mean());
    for (std::size_t i = 0; i < m->boundary.size(); ++i) x(m->boundary[i]) = b(c, i);
    auto gradient = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(v.size());
      for (Eigen::Index e = 0; e < m->element_count(); ++e) {
        Eigen::Vector3d ve(v(m->tris(0, e)), v(m->tris(1, e)), v(m->tris(2, e)));
        Eigen::Vector2d grad = m->grad[e] * ve;
        double n = grad.norm();
        if (n == 0) continue;
        Eigen::Vector3d loc = m->areas(e) * 1.5 * std::pow(n, -0.5) * (m->grad[e].transpose() * grad);
        for (int k = 0; k < 3; ++k) g(m->tris(k, e)) += loc(k);
      }
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (m->on_boundary[i]) g(i) = 0;
      return g;
    };
    Eigen::VectorXd g = gradient(x);
    double step = 1e-3;
    for (int it = 0; it < 200000 && g.norm() > 1e-11; ++it) {
      Eigen::VectorXd xn = x - step * g, gn = gradient(xn);
      Eigen::VectorXd s = xn - x, y = gn - g;
      double sy = s.dot(y);
      step = sy > 0 ? s.dot(s) / sy : 1e-3;
      x = xn;
      g = gn;
    }
    Eigen::VectorXd sol = u.values.row(c).transpose();
    double e_newton = p_energy(*m, sol, 1.5, 0), e_gd = p_energy(*m, x, 1.5, 0);
    CHECK(std::abs(e_newton - e_gd) <= 1e-4 * e_gd);
  }
}

TEST_CASE("radial target map Lipschitz quotient stays below its bound") {
  auto pent = std::make_shared<const JordanDomain>(make_regular_polygon(5));
  LipschitzTargetMap G(pent, Point(0.1, -0.05));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    Complex a = std::polar(std::sqrt(U(rng)), kTwoPi * U(rng));
    Complex b = a + std::polar(0.05 * U(rng), kTwoPi * U(rng));
    if (std::abs(b) > 1) continue;
    worst = std::max(worst, (G.eval(a) - G.eval(b)).norm() / std::abs(a - b));
  }
  CHECK(worst <= G.lipschitz_bound());
  auto L = std::make_shared<const JordanDomain>(make_l_shape());
  CHECK_THROWS_AS(LipschitzTargetMap(L, Point(1.8, 0.2)), InvalidArgument);
}

TEST_CASE("harmonic solution obeys the discrete maximum principle") {
  auto m = disk(4);
  CircleMap f = random_monotone_map(8, 10, unit_circle_ptr(), unit_circle_ptr());
  Eigen::Matrix2Xd b = boundary_values(*m, f);
  MeshField u = p_harmonic_extend(m, b, 2.0);
  for (int c = 0; c < 2; ++c) {
    CHECK(u.values.row(c).maxCoeff() <= b.row(c).maxCoeff() + 1e-12);
    CHECK(u.values.row(c).minCoeff() >= b.row(c).minCoeff() - 1e-12);
  }
}
