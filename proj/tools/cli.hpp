#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sobex/boundary_maps.hpp"
#include "sobex/io.hpp"
#include "sobex/mesh.hpp"

namespace sobex::cli {

/// Parsed --domain spec: disk, square, pentagon, lshape, cusp:<s>, spiral:<n>.
struct DomainSpec {
  std::string name;
  std::shared_ptr<const JordanDomain> domain;
  std::optional<CuspDomain> cusp;
  std::optional<SpiralDomain> spiral;
  Point center{0, 0};  ///< star center for polygon meshes
};

DomainSpec parse_domain(const std::string& spec);

struct MeshBundle {
  MeshPtr mesh;
  CurvePtr boundary;             ///< source curve of boundary maps on this mesh
  std::optional<CuspDomain> cusp;
};

MeshBundle make_mesh(const DomainSpec& d, int level);

/// Boundary map from `boundary` onto the unit circle: identity, random:<seed>,
/// cusp (needs the cusp domain and p), spiral, file:<path>.
CircleMap parse_map(const std::string& spec, const CurvePtr& boundary, const DomainSpec& d,
                    const std::optional<CuspDomain>& cusp, double p);

/// Writes to path atomically, or to stdout when path is empty.
void emit(const std::string& path, const std::string& content);
std::string dump(const Json& j);

/// Runs named checks, prints one line each, returns 0 iff all pass.
struct Selftest {
  std::vector<std::pair<std::string, bool>> checks;
  void check(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
  int finish() const;
};

/// Exit status set by the subcommand callbacks.
inline int& status() {
  static int s = 0;
  return s;
}

void add_geometry_commands(CLI::App& app);  // domain, map, conformal
void add_analysis_commands(CLI::App& app);  // extend, energy
void add_sharpness_commands(CLI::App& app); // qh, cex

}  // namespace sobex::cli
