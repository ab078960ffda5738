#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assd/datagen.hpp"
#include "assd/solver.hpp"

namespace assd::harness {

enum class SweepVar { none, n, p, s0, pi, r };

std::string to_string(SweepVar v);

struct NamedSolver {
  std::string name;
  SolverConfig config;
};

/// One Monte-Carlo experiment: an instance family, the solvers to run on
/// every instance, and an optional one-parameter sweep.
struct ExperimentConfig {
  datagen::MatrixSpec matrix{datagen::IidGaussian{}, 200, 1000};
  datagen::CoeffSpec coeffs{30, datagen::CoeffLaw::uniform_pos, 0.5, 1.0, 0.0};
  double sigma = 1.0;
  std::vector<NamedSolver> solvers;
  Index repeats = 96;
  std::uint64_t seed = 1;
  SweepVar sweep = SweepVar::none;
  std::vector<double> sweep_values;
  /// L_max = fraction·n for SSD1/ASSD when set (e.g. 0.5).
  std::optional<double> lmax_fraction;
  /// Share one matrix across all repeats of a sweep value.
  bool fix_matrix = false;
  bool plots = true;
  std::string output_dir = "results";
  /// Key/value echo of what was parsed, written to the metadata file.
  std::map<std::string, std::string> echo;

  void validate() const;
};

/// `key = value` lines; '#' starts a comment. Throws ConfigError.
ExperimentConfig parse_config_text(const std::string& text);
/// The same keys as a flat JSON object.
ExperimentConfig parse_config_json(const std::string& text);
/// Picks the encoding from the first non-blank character ('{' means JSON).
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

}  // namespace assd::harness
