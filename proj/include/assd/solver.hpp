#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "assd/decimate.hpp"
#include "assd/threshold.hpp"
#include "assd/types.hpp"

namespace assd {

/// SSD: decimate until the residual vanishes, then refit.
/// SSD1: decimate with the ℓ₂ early stop and step budget, then refit.
/// ASSD: SSD1 followed by the BIC-selected thresholding sweep.
enum class Algorithm { ssd, ssd1, assd };

std::string_view to_string(Algorithm a);
/// Parses "ssd", "ssd1" or "assd" (case-insensitive). Throws ConfigError.
Algorithm parse_algorithm(std::string_view name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::assd;
  std::optional<double> eta;          // explicit early-stop level
  std::optional<double> sigma_known;  // noise s.d.; eta defaults to √n·σ
  std::optional<Index> l_max_override;
  double R = 20.0;
  double tau_step = 0.01;
  double rank_tol = linalg::kDefaultRankTol;
  double l1_tol = 1e-5;
  bool sigma_hat_on_abs = false;
};

/// Early-stop level for SSD1/ASSD: config.eta if set, else √n·σ.
/// Throws ConfigError when neither is available.
double resolve_eta(const SolverConfig& config, Index n);

struct SolveResult {
  Vector beta;        // length p; exact zeros off the support
  IndexList support;  // nonzero indices in selection order
  Index L_stage1 = 0;
  std::vector<decimate::StepRecord> residual_trace;
  std::vector<threshold::BicPathEntry> bic_path;  // ASSD only
  double wall_time = 0.0;                         // seconds
  decimate::StopReason stop_reason = decimate::StopReason::eta_hit;
  Vector stage1_beta;  // coefficients before thresholding
  double eta = 0.0;    // resolved early-stop level (SSD1/ASSD)
  double sigma_hat = 0.0;
  double theta0 = 0.0;
  std::vector<std::string> warnings;
};

SolveResult solve(const DenseMatrix& X, const Vector& y, const SolverConfig& config);

}  // namespace assd
