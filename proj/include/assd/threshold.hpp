#pragma once

#include <span>
#include <string>
#include <vector>

#include "assd/linalg.hpp"
#include "assd/types.hpp"

namespace assd::threshold {

struct ThresholdConfig {
  double R = 20.0;         // largest τ on the grid
  double tau_step = 0.01;  // grid spacing; τ_j = j·tau_step
  /// Use |β| instead of signed β when estimating the coefficient spread.
  bool sigma_hat_on_abs = false;
  /// Re-solve and score at every grid point instead of only where the
  /// support changes. Both give the same answer; the full grid is slow.
  bool full_grid = false;

  /// Index of the last grid point, i.e. the largest j with j·tau_step ≤ R.
  Index grid_last() const;
  double tau(Index j) const { return static_cast<double>(j) * tau_step; }
  void validate() const;
};

struct BicPathEntry {
  double tau = 0.0;
  double theta = 0.0;
  Index p_nz = 0;
  double bic = 0.0;
  IndexList support;  // surviving indices, in stage-1 selection order
  Vector values;      // refit coefficients aligned with support
};

/// Spread of the smaller half of the stage-1 coefficients: the h = ⌊L/2⌋
/// values of smallest magnitude, their mean m and root-mean-square
/// deviation from m. Returns 0 when fewer than two values are given.
double sigma_hat(std::span<const double> values, bool on_abs = false);

/// σ̂·√(2 ln p). Throws InputError for p < 2 or negative σ̂.
double base_threshold(double sigma_hat, Index p);

/// ½‖y − Xβ‖₂² + p_nz·ln n.
double bic_score(const Vector& y, const DenseMatrix& X, const Vector& beta);

struct SweepResult {
  Vector best_beta;
  IndexList best_support;
  double best_tau = 0.0;
  double best_bic = 0.0;
  double sigma_hat = 0.0;
  double theta0 = 0.0;
  std::vector<BicPathEntry> path;  // evaluated grid points, ascending τ
  std::vector<std::string> warnings;
};

/// Prunes stage-1 coefficients whose current magnitude falls below τ·θ₀ for
/// τ = 0, tau_step, …, R, refitting the survivors after every change, and
/// returns the snapshot with the smallest BIC (earliest τ on ties).
SweepResult threshold_sweep(const DenseMatrix& X, const Vector& y, const Vector& stage1_beta,
                            std::span<const Index> selected, const ThresholdConfig& config,
                            double rank_tol = linalg::kDefaultRankTol);

}  // namespace assd::threshold
