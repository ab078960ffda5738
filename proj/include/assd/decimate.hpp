#pragma once

#include <string_view>
#include <vector>

#include "assd/linalg.hpp"
#include "assd/types.hpp"

namespace assd::decimate {

enum class StopKind { eta_l2, naive_l1, step_budget_only };

enum class StopReason { eta_hit, L_max_hit, l1_hit, dead_end };

std::string_view to_string(StopReason reason);

struct StoppingRule {
  StopKind kind = StopKind::eta_l2;
  double eta = 0.0;      // ℓ₂ threshold on the residual response
  double l1_tol = 1e-5;  // threshold on ‖y′‖₁ / n
  Index l_max = 1;

  /// Stop once ‖y′‖₂ ≤ eta or after l_max steps.
  static StoppingRule eta_l2(double eta, Index l_max);
  /// Stop once ‖y′‖₁/n < l1_tol; capped at min(n, p) steps.
  static StoppingRule naive_l1(double l1_tol = 1e-5);
  /// Stop after exactly l_max steps (or earlier on a dead end).
  static StoppingRule step_budget(Index l_max);
};

/// floor(n / ln n), at least 1. Throws InputError for n < 2.
Index l_max_default(Index n);

/// One row of the residual trace. Step 0 is the undecimated state and has
/// selected == -1.
struct StepRecord {
  Index step = 0;
  Index selected = -1;
  double l1_per_n = 0.0;
  double l2 = 0.0;
  Index dropped_total = 0;  // degenerate columns removed so far
};

/// Working state of the decimation loop.
///
/// The working copy of X holds deflated columns for every active index and
/// the (frozen) deflated pivot for every selected index. The n×n Gram matrix
/// of exactly those columns is kept up to date in O(n²) per step. Retired
/// pivots are orthogonal to the residual and to all active columns, so they
/// keep the Gram matrix nonsingular without contributing to the guidance
/// vector of the active columns.
class DecimationState {
 public:
  DecimationState(const DenseMatrix& X, const Vector& y);

  const DenseMatrix& matrix() const { return work_; }
  const Vector& residual() const { return residual_; }
  const IndexList& active() const { return active_; }
  const IndexList& selected() const { return selected_; }
  const IndexList& dropped() const { return dropped_; }
  Index steps() const { return static_cast<Index>(selected_.size()); }
  double pivot_floor() const { return pivot_floor_; }

  /// Guidance vector over the active columns for the current residual.
  linalg::GuidanceVector guidance(double rank_tol) const;

  StepRecord record() const;

 private:
  friend StepRecord decimation_step(DecimationState& state, double rank_tol);

  void drop_degenerate();

  DenseMatrix work_;
  Vector residual_;
  IndexList active_;  // ascending
  IndexList selected_;
  IndexList dropped_;
  DenseMatrix gram_;
  double pivot_floor_ = 0.0;
};

/// Selects the active column with the largest |γ̂| (lowest index on ties),
/// retires it and deflates the remaining columns and the residual against it.
/// Throws DeadEndError when no active column is left.
StepRecord decimation_step(DecimationState& state, double rank_tol = linalg::kDefaultRankTol);

struct DecimationResult {
  IndexList selected;
  std::vector<StepRecord> trace;  // trace[0] is the initial state
  StopReason stop_reason = StopReason::eta_hit;
  Index dropped = 0;
  Vector residual;
};

DecimationResult run_decimation(const DenseMatrix& X, const Vector& y, const StoppingRule& rule,
                                double rank_tol = linalg::kDefaultRankTol);

struct Stage1Result {
  Vector beta;  // length p, exact zeros off the selection
  DecimationResult decimation;
};

/// Decimation followed by a least-squares refit of the original y on the
/// original columns that were selected.
Stage1Result stage1_solve(const DenseMatrix& X, const Vector& y, const StoppingRule& rule,
                          double rank_tol = linalg::kDefaultRankTol);

}  // namespace assd::decimate
