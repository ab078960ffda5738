#include "assd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace assd::oracle {

namespace {

struct JacobiResult {
  DenseMatrix W;  // A·V, mutually orthogonal columns
  DenseMatrix V;
};

// Hestenes one-sided Jacobi: rotate column pairs of A until all are orthogonal.
JacobiResult one_sided_jacobi(const DenseMatrix& A) {
  JacobiResult r{A, DenseMatrix::Identity(A.cols(), A.cols())};
  const Index k = A.cols();
  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i < k - 1; ++i) {
      for (Index j = i + 1; j < k; ++j) {
        const double a = r.W.col(i).squaredNorm();
        const double b = r.W.col(j).squaredNorm();
        const double c = r.W.col(i).dot(r.W.col(j));
        if (a == 0.0 || b == 0.0 || std::abs(c) <= eps * std::sqrt(a * b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * c);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (DenseMatrix* m : {&r.W, &r.V}) {
          const Vector ci = m->col(i);
          const Vector cj = m->col(j);
          m->col(i) = cs * ci - sn * cj;
          m->col(j) = sn * ci + cs * cj;
        }
      }
    }
    if (!rotated) break;
  }
  return r;
}

// Extends orthonormal columns Q (m×r) to an m×m orthogonal matrix.
DenseMatrix complete_basis(const DenseMatrix& Q, Index m) {
  DenseMatrix out(m, m);
  Index filled = Q.cols();
  out.leftCols(filled) = Q;
  for (Index e = 0; e < m && filled < m; ++e) {
    Vector v = Vector::Unit(m, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Index c = 0; c < filled; ++c) v -= out.col(c).dot(v) * out.col(c);
    const double nv = v.norm();
    if (nv > 1e-8) out.col(filled++) = v / nv;
  }
  return out;
}

// Orthonormal left factor from W = A·V: normalized nonzero columns, then completion.
DenseMatrix normalized_columns(const DenseMatrix& W, const Vector& sing, Index m, double floor) {
  Index r = 0;
  while (r < sing.size() && sing[r] > floor) ++r;
  DenseMatrix Q(m, r);
  for (Index c = 0; c < r; ++c) Q.col(c) = W.col(c) / sing[c];
  return complete_basis(Q, m);
}

Vector least_squares(const DenseMatrix& A, const Vector& y) {
  return pinv_via_svd(A, 1e-12) * y;
}

double sigma_hat_reference(std::vector<double> v) {
  if (v.size() < 2) return 0.0;
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(v[a]) < std::abs(v[b]); });
  const std::size_t h = v.size() / 2;
  double m = 0.0;
  for (std::size_t j = 0; j < h; ++j) m += v[order[j]];
  m /= static_cast<double>(h);
  double var = 0.0;
  for (std::size_t j = 0; j < h; ++j) var += std::pow(v[order[j]] - m, 2);
  return std::sqrt(var / static_cast<double>(h));
}

}  // namespace

Index SvdFactors::rank(double rel_tol) const {
  if (singular.size() == 0 || singular[0] == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < singular.size(); ++i)
    if (singular[i] > rel_tol * singular[0]) ++r;
  return r;
}

SvdFactors full_svd(const DenseMatrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  const bool wide = n < p;
  const DenseMatrix A = wide ? DenseMatrix(X.transpose()) : X;
  JacobiResult jr = one_sided_jacobi(A);

  const Index k = A.cols();
  Vector sing(k);
  for (Index c = 0; c < k; ++c) sing[c] = jr.W.col(c).norm();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sing[a] > sing[b]; });
  DenseMatrix W(A.rows(), k), V(k, k);
  Vector s(k);
  for (Index c = 0; c < k; ++c) {
    const Index src = order[static_cast<std::size_t>(c)];
    W.col(c) = jr.W.col(src);
    V.col(c) = jr.V.col(src);
    s[c] = sing[src];
  }
  const double floor = (s.size() ? s[0] : 0.0) * 1e-14;

  SvdFactors f;
  f.singular = s;
  if (wide) {
    // Xᵀ·V = W  ⇒  X = V·diag(s)·(W/s)ᵀ
    f.U = V;
    f.V = normalized_columns(W, s, p, floor);
  } else {
    f.V = V;
    f.U = normalized_columns(W, s, n, floor);
  }
  return f;
}

DenseMatrix pinv_via_svd(const DenseMatrix& X, double rank_tol) {
  const SvdFactors f = full_svd(X);
  DenseMatrix P = DenseMatrix::Zero(X.cols(), X.rows());
  const Index r = f.rank(rank_tol);
  for (Index i = 0; i < r; ++i) P += (f.V.col(i) / f.singular[i]) * f.U.col(i).transpose();
  return P;
}

NoiselessGuidance exact_guidance_noiseless(const DenseMatrix& X, const Vector& beta0,
                                           bool with_overlap, double rank_tol) {
  if (beta0.size() != X.cols()) throw ContractError("exact_guidance_noiseless: length mismatch");
  const SvdFactors f = full_svd(X);
  const Index r = f.rank(rank_tol);
  const DenseMatrix V1 = f.V.leftCols(r);
  NoiselessGuidance g;
  g.gamma = V1 * (V1.transpose() * beta0);
  if (with_overlap) g.overlap = V1 * V1.transpose();
  return g;
}

SubsetFit best_subset_bruteforce(const DenseMatrix& X, const Vector& y, Index k_max) {
  const Index p = X.cols();
  if (p > 16) throw ContractError("best_subset_bruteforce: refusing p > 16");
  if (k_max < 0 || k_max > p) throw ContractError("best_subset_bruteforce: k_max outside [0, p]");
  if (y.size() != X.rows()) throw ContractError("best_subset_bruteforce: y length != X rows");

  const double tie = 1e-10 * std::max(1.0, y.norm());
  SubsetFit best{{}, Vector::Zero(p), y.norm()};
  for (Index k = 1; k <= k_max; ++k) {
    // Lexicographic enumeration of k-combinations.
    std::vector<Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Index{0});
    while (true) {
      DenseMatrix xs(X.rows(), k);
      for (Index j = 0; j < k; ++j) xs.col(j) = X.col(idx[static_cast<std::size_t>(j)]);
      const Vector b = least_squares(xs, y);
      const double res = (y - xs * b).norm();
      if (res < best.residual - tie) {
        best.support.assign(idx.begin(), idx.end());
        best.beta = Vector::Zero(p);
        for (Index j = 0; j < k; ++j) best.beta[idx[static_cast<std::size_t>(j)]] = b[j];
        best.residual = res;
      }
      Index pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == p - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (Index j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

NestedBicResult exhaustive_nested_bic(const DenseMatrix& X, const Vector& y, const Vector& stage1_beta,
                                      std::span<const Index> selected, double R, double tau_step) {
  const auto m = static_cast<Index>(selected.size());
  if (m > 16) throw ContractError("exhaustive_nested_bic: refusing more than 16 indices");
  const double log_n = std::log(static_cast<double>(X.rows()));

  struct Entry {
    Vector values;  // aligned with the subset's bits in selection order
    double bic;
  };
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<Entry> table(subsets);
  double global_min = 0.0;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<Index> cols;
    for (Index b = 0; b < m; ++b)
      if (mask & (std::size_t{1} << b)) cols.push_back(selected[static_cast<std::size_t>(b)]);
    Vector values;
    Vector r = y;
    Index nnz = 0;
    if (!cols.empty()) {
      DenseMatrix xs(X.rows(), static_cast<Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) xs.col(static_cast<Index>(j)) = X.col(cols[j]);
      values = least_squares(xs, y);
      r -= xs * values;
      nnz = static_cast<Index>((values.array() != 0.0).count());
    }
    table[mask] = {values, 0.5 * r.squaredNorm() + static_cast<double>(nnz) * log_n};
    if (mask == 0 || table[mask].bic < global_min) global_min = table[mask].bic;
  }

  std::vector<double> s1;
  for (Index c : selected) s1.push_back(stage1_beta[c]);
  const double theta0 =
      X.cols() >= 2 ? sigma_hat_reference(s1) * std::sqrt(2.0 * std::log(static_cast<double>(X.cols()))) : 0.0;

  const Index last = static_cast<Index>(std::floor(R / tau_step + 1e-9));
  std::size_t mask = subsets - 1;
  std::size_t best_mask = mask;
  double best_bic = table[mask].bic;
  double best_tau = 0.0;
  for (Index j = 1; j <= last && theta0 > 0.0; ++j) {
    const double tau = static_cast<double>(j) * tau_step;
    const Entry& cur = table[mask];
    std::size_t next = mask;
    Index pos = 0;
    for (Index b = 0; b < m; ++b) {
      if (!(mask & (std::size_t{1} << b))) continue;
      if (std::abs(cur.values[pos]) < tau * theta0) next &= ~(std::size_t{1} << b);
      ++pos;
    }
    mask = next;
    if (table[mask].bic < best_bic) {
      best_bic = table[mask].bic;
      best_mask = mask;
      best_tau = tau;
    }
  }

  NestedBicResult out;
  out.bic = best_bic;
  out.tau = best_tau;
  out.theta0 = theta0;
  out.global_min_bic = global_min;
  out.beta = Vector::Zero(X.cols());
  Index pos = 0;
  for (Index b = 0; b < m; ++b) {
    if (!(best_mask & (std::size_t{1} << b))) continue;
    const double v = table[best_mask].values[pos++];
    if (v != 0.0) {
      out.support.push_back(selected[static_cast<std::size_t>(b)]);
      out.beta[selected[static_cast<std::size_t>(b)]] = v;
    }
  }
  return out;
}

}  // namespace assd::oracle
