#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sobex/conformal.hpp"
#include "sobex/extension.hpp"

namespace sobex {

struct EnergyReport {
  double value = 0;
  double p = 2;
  std::vector<std::pair<double, double>> history;  ///< (resolution, value)
  bool divergent = false;
  double growth_rate = 1;  ///< geometric mean of successive ratios
  std::string protocol;
};

/// True iff there are at least two values and every successive ratio is >= escalation.
bool escalates(const std::vector<std::pair<double, double>>& history, double escalation);

/// Fills divergent and growth_rate from history; value is the last entry.
void finish_report(EnergyReport& report, double escalation);

/// Diagonal band protocol for the boundary double integrals. Level l
/// excludes chords shorter than eta_init / 2^l.
struct BandOptions {
  int levels = 5;
  double eta_init = 1.0 / 64;
  double escalation = 1.1;
};

/// int int |psi(xi) - psi(eta)|^p / |xi - eta|^p |dxi| |deta| over the circle.
EnergyReport p_douglas(const Trace& psi, double p, const BandOptions& band = {});
EnergyReport p_douglas(const CircleMap& phi, double p, const BandOptions& band = {});
inline EnergyReport douglas(const Trace& psi, const BandOptions& band = {}) { return p_douglas(psi, 2.0, band); }
EnergyReport douglas(const CircleMap& phi, const BandOptions& band = {});

/// int int |log |phi^-1(xi) - phi^-1(eta)|| over the target curve in arc
/// length. The band is measured in the normalized target parameter.
EnergyReport inverse_douglas(const CircleMap& phi, const BandOptions& band = {});

/// sum_e area_e |Dh|_F^p.
double sobolev_value(const MeshField& field, double p);
EnergyReport sobolev_energy(const MeshField& field, double p);
/// One history entry per field (resolution = mesh level).
EnergyReport sobolev_energy(const std::vector<MeshField>& fields, double p, double escalation = 1.1);

/// int_D |g'(z)|^(2-p) / |omega - z|^p dA for one boundary point.
double condition_32_at(const AnalyticMap& g, double p, double omega_angle, double tol = 1e-8);
/// Max over omega_count equispaced boundary points.
double condition_32(const AnalyticMap& g, double p, int omega_count = 64, double tol = 1e-8);

/// mu(S_eps(theta)) for mu = weight dA.
double carleson_box(const std::function<double(Complex)>& weight, double eps, double theta, double tol = 1e-7);
/// sup over the grids of mu(S_eps(theta)) / eps.
double carleson_constant(const std::function<double(Complex)>& weight, const std::vector<double>& eps_grid,
                         const std::vector<double>& theta_grid, double tol = 1e-7);

}  // namespace sobex
