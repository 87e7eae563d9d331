// Run configuration: line-based "key = value" files with command-line overrides.
#pragma once

#include "dirprec/geometry.hpp"
#include "dirprec/kernels.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dirprec {

enum class Mode { solve, verify, bench, ablate };
enum class PrecondMode { on, off, both };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);
PrecondMode parse_precond(const std::string& s);
std::string to_string(PrecondMode m);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<ShapeId> shapes{ShapeId::ellipse};
  ShapeParams shape_params;
  std::vector<int> q{4};
  int p = 8;
  std::vector<BoundaryCondition> bcs{BoundaryCondition::dirichlet};
  double eta_factor = 1.0;  // eta = eta_factor * omega
  int m_l = 4;
  int m_c = 10;
  double tau = 4.0;
  double tol = 1e-6;
  int restart = 80;
  int max_iterations = 500;
  PrecondMode precond = PrecondMode::on;
  Mode mode = Mode::solve;
  std::string output;
  unsigned long seed = 1;
  bool exact_diagonal = false;
  bool zero_e = false;
  int dense_limit = 4096;
  int matvec_repeats = 5;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Applies one "key = value" assignment. Unknown keys and malformed values
/// throw ConfigError.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads a config file; errors carry "path:line:" prefixes.
RunConfig load_config(const std::string& path, RunConfig base = {});
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>",
                       RunConfig base = {});

}  // namespace dirprec
