#pragma once

// Run configuration: defaults, TOML-style key = value files, validation.

#include "nilspec/dual_trace.hpp"
#include "nilspec/group.hpp"
#include "nilspec/quadrature.hpp"
#include "nilspec/schrodinger.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilspec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geometric s-grid "lo:hi:n".
struct SGrid {
  double lo = 100.0;
  double hi = 1e4;
  std::size_t n = 5;

  static SGrid parse(const std::string& spec);
  std::vector<double> values() const;
  std::string to_string() const;
};

struct RunConfig {
  GroupId group = GroupId::Engel;
  std::string command;
  SGrid s_grid;
  std::vector<std::size_t> nodes;  ///< empty: per-group default
  QuadRule rule = QuadRule::GaussLegendre;
  TraceMethod method = TraceMethod::VolumeBound;
  double kappa = 4.0;
  double tol = 1e-10;
  double points_per_wavelength = 10.0;
  std::size_t max_points = std::size_t{1} << 25;
  double dual_epsilon = 1e-6;
  std::string output;  ///< empty: stdout
  unsigned threads = 1;
  std::uint64_t seed = 1;

  /// Throws ConfigError when a tolerance is non-positive or the grid is not increasing.
  void validate() const;
  SolverConfig solver() const;
  QuadratureSpec quadrature() const;
  /// Effective configuration, one "key = value" per line.
  std::map<std::string, std::string> entries() const;
  /// "# key = value" lines for output headers.
  std::string provenance(const std::string& prefix = "# ") const;
};

/// Parse key = value lines; '#' starts a comment, [sections] are ignored,
/// values may be double-quoted.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Apply parsed entries on top of cfg; unknown keys are an error.
void apply_entries(RunConfig& cfg, const std::map<std::string, std::string>& kv);

/// Read a file and apply it on top of cfg.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Config path from NILSPEC_CONFIG, if set and non-empty.
std::optional<std::string> config_path_from_env();

}  // namespace nilspec
