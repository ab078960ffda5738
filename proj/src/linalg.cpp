#include "assd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace assd::linalg {

namespace {

Vector project_out(const Vector& v, const Vector& xk, double pivot_floor) {
  if (v.size() != xk.size()) {
    throw ContractError("deflation: vector lengths differ (" + std::to_string(v.size()) +
                        " vs " + std::to_string(xk.size()) + ")");
  }
  const double xkk = xk.squaredNorm();
  if (!(std::sqrt(xkk) > pivot_floor)) {
    throw DegeneratePivotError("deflation: pivot column norm below floor");
  }
  return v - (v.dot(xk) / xkk) * xk;
}

}  // namespace

void require_finite(const DenseMatrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

GuidanceVector make_guidance(Vector values, IndexList columns) {
  if (columns.empty()) {
    columns.resize(static_cast<std::size_t>(values.size()));
    std::iota(columns.begin(), columns.end(), Index{0});
  }
  if (static_cast<Index>(columns.size()) != values.size()) {
    throw ContractError("make_guidance: columns and values differ in length");
  }
  IndexList ranking(columns.size());
  std::iota(ranking.begin(), ranking.end(), Index{0});
  std::sort(ranking.begin(), ranking.end(), [&](Index a, Index b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma > mb;
    return columns[static_cast<std::size_t>(a)] < columns[static_cast<std::size_t>(b)];
  });
  return {std::move(columns), std::move(values), std::move(ranking)};
}

std::optional<Vector> solve_gram(const DenseMatrix& gram, const Vector& rhs,
                                 double pivot_tol) {
  Eigen::LDLT<DenseMatrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  const Vector d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  if (!(dmax > 0.0) || !(dmin > pivot_tol * dmax)) return std::nullopt;

  Vector z = ldlt.solve(rhs);
  const Vector r = rhs - gram.selfadjointView<Eigen::Lower>() * z;
  z += ldlt.solve(r);
  return z;
}

Vector min_norm_least_squares_svd(const DenseMatrix& X, const Vector& y, double rank_tol) {
  Eigen::BDCSVD<DenseMatrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Vector gamma = Vector::Zero(X.cols());
  if (s.size() == 0 || s[0] == 0.0) return gamma;
  const double cutoff = rank_tol * s[0];
  const Vector uty = svd.matrixU().transpose() * y;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) gamma += (uty[i] / s[i]) * svd.matrixV().col(i);
  }
  return gamma;
}

Vector min_norm_least_squares(const DenseMatrix& X, const Vector& y, double rank_tol) {
  if (y.size() != X.rows()) {
    throw ContractError("min_norm_least_squares: y has length " + std::to_string(y.size()) +
                        " but X has " + std::to_string(X.rows()) + " rows");
  }
  if (rank_tol < 0.0) throw ContractError("min_norm_least_squares: rank_tol must be >= 0");
  require_finite(X, "min_norm_least_squares X");
  require_finite(y, "min_norm_least_squares y");

  if (X.rows() <= X.cols()) {
    DenseMatrix gram = DenseMatrix::Zero(X.rows(), X.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(X);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    if (auto z = solve_gram(gram, y, std::max(rank_tol, kGramPivotGuard))) {
      return X.transpose() * *z;
    }
  }
  return min_norm_least_squares_svd(X, y, rank_tol);
}

Vector deflate_column(const Vector& xi, const Vector& xk, double pivot_floor) {
  return project_out(xi, xk, pivot_floor);
}

Vector deflate_residual(const Vector& y, const Vector& xk, double pivot_floor) {
  return project_out(y, xk, pivot_floor);
}

Vector refit_on_support(const DenseMatrix& X, const Vector& y,
                        std::span<const Index> support, double rank_tol) {
  if (y.size() != X.rows()) throw ContractError("refit_on_support: y length != X rows");
  if (support.empty()) return Vector{};
  DenseMatrix xs(X.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    const Index c = support[j];
    if (c < 0 || c >= X.cols()) throw ContractError("refit_on_support: index out of range");
    xs.col(static_cast<Index>(j)) = X.col(c);
  }
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod;
  cod.setThreshold(std::max(rank_tol, Eigen::NumTraits<double>::epsilon()));
  cod.compute(xs);
  return cod.solve(y);
}

Vector scatter(std::span<const Index> support, const Vector& values, Index size) {
  if (static_cast<Index>(support.size()) != values.size()) {
    throw ContractError("scatter: support and values differ in length");
  }
  Vector out = Vector::Zero(size);
  for (std::size_t j = 0; j < support.size(); ++j) out[support[j]] = values[static_cast<Index>(j)];
  return out;
}

}  // namespace assd::linalg
