#pragma once

// Slow reference implementations for tests. Nothing here shares code with the
// fast paths in linalg/decimate/threshold beyond the basic Eigen containers.

#include <optional>
#include <span>

#include "assd/types.hpp"

namespace assd::oracle {

/// X = U·diag(singular)·Vᵀ with full square U (n×n) and V (p×p). The first
/// min(n, p) singular values are sorted descending; V's leading columns
/// pair with them.
struct SvdFactors {
  DenseMatrix U;
  Vector singular;
  DenseMatrix V;

  /// Number of singular values strictly above rel_tol·singular[0].
  Index rank(double rel_tol) const;
};

/// One-sided Jacobi SVD with orthonormal completion of U and V.
SvdFactors full_svd(const DenseMatrix& X);

/// V₁·D₁⁺·Uᵀ with singular values ≤ rank_tol·λ₁ zeroed.
DenseMatrix pinv_via_svd(const DenseMatrix& X, double rank_tol = 1e-12);

struct NoiselessGuidance {
  Vector gamma;                      // V₁V₁ᵀβ⁰
  std::optional<DenseMatrix> overlap;  // V₁V₁ᵀ, when requested
};

NoiselessGuidance exact_guidance_noiseless(const DenseMatrix& X, const Vector& beta0,
                                           bool with_overlap = false, double rank_tol = 1e-12);

struct SubsetFit {
  IndexList support;  // ascending
  Vector beta;        // length p
  double residual = 0.0;
};

/// Exhaustive search over supports of size ≤ k_max for the smallest
/// least-squares residual. Ties (within 1e-10·‖y‖) keep the smaller, then
/// lexicographically earlier, support. Refuses p > 16.
SubsetFit best_subset_bruteforce(const DenseMatrix& X, const Vector& y, Index k_max);

struct NestedBicResult {
  IndexList support;  // in selection order
  Vector beta;        // length p
  double bic = 0.0;
  double tau = 0.0;
  double theta0 = 0.0;
  double global_min_bic = 0.0;  // over every subset of the selection
};

/// Scores every subset of `selected` (at most 16 indices) with its own
/// least-squares refit, then walks the τ grid over that table: at each τ
/// drop the indices whose current refit magnitude is below τ·θ₀ and look up
/// the new subset. θ₀ is computed here from the stage-1 values.
NestedBicResult exhaustive_nested_bic(const DenseMatrix& X, const Vector& y, const Vector& stage1_beta,
                                      std::span<const Index> selected, double R, double tau_step);

}  // namespace assd::oracle
