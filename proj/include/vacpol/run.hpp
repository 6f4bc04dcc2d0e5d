#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vacpol/lattice.hpp"

namespace vacpol {

enum class Command { Multipliers, SCF, Renorm, PV, Crosscheck };

struct GaussianSpec {
  double charge = 1.0;
  double width = 1.0;
};

/// Fully resolved settings for one CLI command.
struct RunConfig {
  Command command = Command::Multipliers;

  double box_length = 6.283185307179586;
  double cutoff = 2.5;
  CutoffShape shape = CutoffShape::Sharp;
  double mass = 1.0;

  std::optional<double> alpha;
  std::optional<double> alpha_ph;
  std::optional<double> z3;
  double q = 0.0;
  std::array<double, 3> pv_masses{1.0, 2.0, 3.0};

  /// Exactly one of these is set after parsing.
  std::optional<GaussianSpec> gaussian;
  std::optional<std::string> density_file;

  std::string output_dir = ".";

  double residual_tol = 1e-9;
  int max_iterations = 500;
  double degeneracy_tol = 1e-9;
  /// Empty for optimal damping.
  std::optional<double> fixed_damping;

  std::vector<double> k_grid;
  std::vector<double> uehling_radii{0.5, 1.0, 2.0};
  int series_order = 2;

  void validate() const;
};

/// Parses a JSON object; missing keys keep their defaults. Throws ValidationError.
RunConfig parse_config(const std::string& json_text);

/// Canonical JSON of every resolved field, with keys in a fixed order.
std::string config_to_json(const RunConfig& config);

std::string to_string(Command command);

/// Runs the command, writing its files into config.output_dir.
/// Returns 0 on success, 2 for invalid input, 3 for numerical failure;
/// diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& err);

/// parse_config followed by run, with parse failures mapped to exit code 2.
int run_json(const std::string& json_text, std::ostream& err);

}  // namespace vacpol
