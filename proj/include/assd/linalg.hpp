#pragma once

#include <optional>
#include <span>

#include "assd/types.hpp"

namespace assd::linalg {

/// Relative cutoff below which singular values count as zero.
inline constexpr double kDefaultRankTol = 1e-12;

/// A column whose norm falls below this fraction of the largest original
/// column norm is never used as a deflation pivot.
inline constexpr double kPivotFloorRel = 1e-10;

/// Gram-matrix pivot ratios below this defer to the SVD route: squaring the
/// condition number leaves too few correct digits.
inline constexpr double kGramPivotGuard = 1e-10;

/// Minimum-norm least-squares solution over a set of columns, with those
/// columns ranked by descending magnitude of their coefficient.
struct GuidanceVector {
  IndexList columns;  // column index of values[j]
  Vector values;
  IndexList ranking;  // positions into values/columns, |values| descending
};

/// Ranks `values` by descending magnitude; equal magnitudes keep ascending
/// column order. `columns` defaults to 0..len-1.
GuidanceVector make_guidance(Vector values, IndexList columns = {});

/// Returns X⁺y. Singular values at or below rank_tol times the largest one
/// are treated as zero.
///
/// The fast route factors the n×n Gram matrix XXᵀ; when that factorization
/// is near singular the full SVD of X is used instead.
Vector min_norm_least_squares(const DenseMatrix& X, const Vector& y,
                              double rank_tol = kDefaultRankTol);

/// Same contract as min_norm_least_squares, always through the SVD.
Vector min_norm_least_squares_svd(const DenseMatrix& X, const Vector& y,
                                  double rank_tol = kDefaultRankTol);

/// Solves G z = rhs for symmetric positive definite G with LDLᵀ and one
/// refinement step. Returns nullopt when the smallest pivot is below
/// `pivot_tol` relative to the largest.
std::optional<Vector> solve_gram(const DenseMatrix& gram, const Vector& rhs,
                                 double pivot_tol);

/// xi − (xiᵀxk / xkᵀxk)·xk. Throws DegeneratePivotError when ‖xk‖₂ ≤ pivot_floor.
Vector deflate_column(const Vector& xi, const Vector& xk, double pivot_floor = 0.0);

/// y − (yᵀxk / xkᵀxk)·xk, the residual-response update.
Vector deflate_residual(const Vector& y, const Vector& xk, double pivot_floor = 0.0);

/// Least-squares coefficients of y on the columns listed in `support`, in
/// that order. Rank-deficient column sets get the minimum-norm minimizer.
/// An empty support yields an empty vector.
Vector refit_on_support(const DenseMatrix& X, const Vector& y,
                        std::span<const Index> support,
                        double rank_tol = kDefaultRankTol);

/// Scatters `values` into a length-`size` vector at `support`; all else zero.
Vector scatter(std::span<const Index> support, const Vector& values, Index size);

/// Throws InputError unless every entry is finite.
void require_finite(const DenseMatrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

}  // namespace assd::linalg
