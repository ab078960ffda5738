#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "assd/config.hpp"
#include "assd/metrics.hpp"

namespace assd::harness {

/// One solver run on one generated instance.
struct TrialRow {
  std::optional<double> sweep;  // empty when the experiment has no sweep
  Index sweep_index = 0;
  Index repeat = 0;
  std::string solver;
  metrics::TrialRecord record;
  bool failed = false;
  std::string error;
};

/// Aggregate over the successful trials of one (sweep value, solver) pair.
struct ResultRow {
  std::optional<double> sweep;
  std::string solver;
  metrics::Summary summary;
  Index failures = 0;
};

struct ResultTable {
  SweepVar sweep = SweepVar::none;
  std::vector<ResultRow> rows;    // sweep-major, solvers in config order
  std::vector<TrialRow> trials;   // sweep-major, then repeat, then solver
};

/// hash(master, sweep index, repeat index).
std::uint64_t trial_seed(std::uint64_t master, Index sweep_index, Index repeat);

/// Matrix and coefficient specs with the sweep variable set to `value`.
std::pair<datagen::MatrixSpec, datagen::CoeffSpec> apply_sweep(const ExperimentConfig& config,
                                                               std::optional<double> value);

/// The solver settings used on an n-row instance (applies lmax_fraction).
SolverConfig resolve_solver(const SolverConfig& base, const ExperimentConfig& config, Index n);

/// ASSD_JOBS when set to a positive integer, otherwise 1.
unsigned default_jobs();

/// Runs every (sweep value, repeat) trial with every solver on `jobs` worker
/// threads. With write_files, results land in config.output_dir:
/// trials.csv, summary.csv, metadata.json, plus diagnostics of the first
/// trial and sweep plots. Throws ConfigError for unusable settings; failures
/// inside a trial are recorded and left out of the aggregates.
ResultTable run_experiment(const ExperimentConfig& config, unsigned jobs = 1, bool write_files = true);

void write_trials_csv(const std::string& path, const ResultTable& table);
void write_summary_csv(const std::string& path, const ResultTable& table);

/// Parses a trials.csv back into rows (failed rows keep their error text).
std::vector<TrialRow> read_trials_csv(const std::string& path);

}  // namespace assd::harness
