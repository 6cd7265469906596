#include "sobex/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sobex {

namespace {

double radical_inverse(int k, int base) {
  double f = 1, r = 0;
  while (k > 0) {
    f /= base;
    r += f * (k % base);
    k /= base;
  }
  return r;
}

}  // namespace

AnalyticMap AnalyticMap::moebius(Complex a, Complex b, Complex c, Complex d) {
  if (std::abs(a * d - b * c) == 0) throw InvalidArgument("moebius: ad - bc = 0");
  AnalyticMap m;
  m.kind = Kind::moebius;
  m.a = a;
  m.b = b;
  m.c = c;
  m.d = d;
  return m;
}

AnalyticMap AnalyticMap::disk_automorphism(Complex w) {
  if (!(std::abs(w) < 1)) throw InvalidArgument("disk_automorphism: |w| must be < 1");
  return moebius(1.0, -w, -std::conj(w), 1.0);
}

AnalyticMap AnalyticMap::phi_tau(double tau) {
  if (!(tau > 0) || !std::isfinite(tau)) throw InvalidArgument("phi_tau: tau must be positive");
  AnalyticMap m;
  m.kind = Kind::phi_tau;
  m.tau = tau;
  return m;
}

AnalyticMap AnalyticMap::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        args.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InvalidArgument("map spec: cannot parse number '" + item + "'");
      }
    }
  }
  if (head == "identity" && args.empty()) return identity();
  if (head == "phi_tau" && args.size() == 1) return phi_tau(args[0]);
  if (head == "moebius" && args.size() == 4) return moebius(args[0], args[1], args[2], args[3]);
  if (head == "moebius" && args.size() == 8)
    return moebius({args[0], args[1]}, {args[2], args[3]}, {args[4], args[5]}, {args[6], args[7]});
  throw InvalidArgument("unknown map spec '" + spec + "'");
}

std::string AnalyticMap::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::identity:
      return "identity";
    case Kind::phi_tau:
      os << "phi_tau:" << tau;
      return os.str();
    case Kind::moebius:
      os << "moebius:" << a.real() << ',' << a.imag() << ',' << b.real() << ',' << b.imag() << ','
         << c.real() << ',' << c.imag() << ',' << d.real() << ',' << d.imag();
      return os.str();
  }
  return "";
}

Complex AnalyticMap::eval(Complex z) const {
  if (!(std::abs(z) <= 1 + 1e-15)) throw InvalidArgument("eval: point outside the closed disk");
  switch (kind) {
    case Kind::identity:
      return z;
    case Kind::moebius: {
      Complex den = c * z + d;
      if (std::abs(den) == 0) throw InvalidArgument("eval: pole of the Moebius map");
      return (a * z + b) / den;
    }
    case Kind::phi_tau: {
      if (z == Complex(1, 0)) throw InvalidArgument("eval: phi_tau is singular at z = 1");
      return -std::pow(-std::log((1.0 - z) / 3.0), -tau);
    }
  }
  return z;
}

Complex AnalyticMap::derivative(Complex z) const {
  if (!(std::abs(z) <= 1 + 1e-15)) throw InvalidArgument("derivative: point outside the closed disk");
  switch (kind) {
    case Kind::identity:
      return 1.0;
    case Kind::moebius: {
      Complex den = c * z + d;
      if (std::abs(den) == 0) throw InvalidArgument("derivative: pole of the Moebius map");
      return (a * d - b * c) / (den * den);
    }
    case Kind::phi_tau: {
      if (z == Complex(1, 0)) throw InvalidArgument("derivative: phi_tau is singular at z = 1");
      Complex w = -std::log((1.0 - z) / 3.0);
      return tau * std::pow(w, -tau - 1) / (1.0 - z);
    }
  }
  return 1.0;
}

double hardy_norm(const std::function<Complex(Complex)>& f, double p,
                  const std::vector<double>& r_grid, int theta_count) {
  if (!(p > 0)) throw InvalidArgument("hardy_norm: p must be positive");
  if (theta_count < 1) throw InvalidArgument("hardy_norm: empty angle grid");
  double best = 0;
  for (double r : r_grid) {
    if (!(r >= 0 && r < 1)) throw InvalidArgument("hardy_norm: radii must lie in [0, 1)");
    double sum = 0;
    for (int j = 0; j < theta_count; ++j)
      sum += std::pow(std::abs(f(std::polar(r, kTwoPi * j / theta_count))), p);
    best = std::max(best, std::pow(sum / theta_count, 1.0 / p));
  }
  return best;
}

double koebe_ratio(const AnalyticMap& g, const JordanDomain& image, Complex z) {
  if (!(std::abs(z) < 1)) throw InvalidArgument("koebe_ratio: z must lie in the open disk");
  double dist = image.dist_to_boundary(to_point(g.eval(z)));
  return dist / ((1 - std::abs(z)) * std::abs(g.derivative(z)));
}

Complex halton_disk_point(int k, double r_max) {
  double u = radical_inverse(k + 1, 2), v = radical_inverse(k + 1, 3);
  return std::polar(r_max * std::sqrt(u), kTwoPi * v);
}

bool univalent_on_sample(const AnalyticMap& g, int n, double r_max, double tol) {
  std::vector<Complex> w(n);
  for (int k = 0; k < n; ++k) w[k] = g.eval(halton_disk_point(k, r_max));
  std::sort(w.begin(), w.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n && w[j].real() - w[i].real() <= tol; ++j)
      if (std::abs(w[j] - w[i]) <= tol) return false;
  return true;
}

}  // namespace sobex
