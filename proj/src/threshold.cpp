#include "assd/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace assd::threshold {

Index ThresholdConfig::grid_last() const {
  const double ratio = R / tau_step;
  const double nearest = std::round(ratio);
  // R = 20, step = 0.01 must give 2000 even though 20/0.01 is not exact.
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) return static_cast<Index>(nearest);
  return static_cast<Index>(std::floor(ratio));
}

void ThresholdConfig::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("threshold: R must be positive");
  if (!(tau_step > 0.0) || !std::isfinite(tau_step)) throw ConfigError("threshold: tau_step must be positive");
  if (grid_last() > 100'000'000) throw ConfigError("threshold: tau grid too large");
}

double sigma_hat(std::span<const double> values, bool on_abs) {
  const std::size_t L = values.size();
  if (L < 2) return 0.0;
  std::vector<double> v(values.begin(), values.end());
  std::stable_sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  const std::size_t h = L / 2;
  if (on_abs) {
    for (std::size_t j = 0; j < h; ++j) v[j] = std::abs(v[j]);
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < h; ++j) mean += v[j];
  mean /= static_cast<double>(h);
  double ss = 0.0;
  for (std::size_t j = 0; j < h; ++j) ss += (v[j] - mean) * (v[j] - mean);
  return std::sqrt(ss / static_cast<double>(h));
}

double base_threshold(double sigma_hat, Index p) {
  if (p < 2) throw InputError("base_threshold: p must be at least 2");
  if (!(sigma_hat >= 0.0)) throw InputError("base_threshold: sigma_hat must be nonnegative");
  return sigma_hat * std::sqrt(2.0 * std::log(static_cast<double>(p)));
}

double bic_score(const Vector& y, const DenseMatrix& X, const Vector& beta) {
  if (beta.size() != X.cols()) throw ContractError("bic_score: beta length != X cols");
  if (y.size() != X.rows()) throw ContractError("bic_score: y length != X rows");
  Vector r = y;
  Index nnz = 0;
  for (Index i = 0; i < beta.size(); ++i) {
    if (beta[i] != 0.0) {
      r.noalias() -= beta[i] * X.col(i);
      ++nnz;
    }
  }
  return 0.5 * r.squaredNorm() + static_cast<double>(nnz) * std::log(static_cast<double>(y.size()));
}

namespace {

struct Snapshot {
  IndexList support;
  Vector values;
};

double snapshot_bic(const DenseMatrix& X, const Vector& y, const Snapshot& s) {
  Vector r = y;
  Index nnz = 0;
  for (std::size_t j = 0; j < s.support.size(); ++j) {
    const double b = s.values[static_cast<Index>(j)];
    if (b != 0.0) {
      r.noalias() -= b * X.col(s.support[j]);
      ++nnz;
    }
  }
  return 0.5 * r.squaredNorm() + static_cast<double>(nnz) * std::log(static_cast<double>(y.size()));
}

bool prune_below(Snapshot& s, double theta) {
  IndexList keep;
  std::vector<double> kept_values;
  for (std::size_t j = 0; j < s.support.size(); ++j) {
    const double b = s.values[static_cast<Index>(j)];
    if (!(std::abs(b) < theta)) {
      keep.push_back(s.support[j]);
      kept_values.push_back(b);
    }
  }
  if (keep.size() == s.support.size()) return false;
  s.support = std::move(keep);
  s.values = Eigen::Map<const Vector>(kept_values.data(), static_cast<Index>(kept_values.size()));
  return true;
}

Index count_nonzero(const Vector& v) {
  return static_cast<Index>((v.array() != 0.0).count());
}

}  // namespace

SweepResult threshold_sweep(const DenseMatrix& X, const Vector& y, const Vector& stage1_beta,
                            std::span<const Index> selected, const ThresholdConfig& config,
                            double rank_tol) {
  config.validate();
  if (stage1_beta.size() != X.cols()) throw ContractError("threshold_sweep: beta length != X cols");
  if (y.size() != X.rows()) throw ContractError("threshold_sweep: y length != X rows");
  for (Index c : selected) {
    if (c < 0 || c >= X.cols()) throw ContractError("threshold_sweep: selected index out of range");
  }

  SweepResult out;
  std::vector<double> stage1_values;
  stage1_values.reserve(selected.size());
  for (Index c : selected) stage1_values.push_back(stage1_beta[c]);

  if (selected.size() < 2) {
    out.warnings.emplace_back("fewer than two stage-1 coefficients; sigma_hat set to 0");
  }
  out.sigma_hat = sigma_hat(stage1_values, config.sigma_hat_on_abs);
  out.theta0 = X.cols() >= 2 ? base_threshold(out.sigma_hat, X.cols()) : 0.0;

  auto record = [&](Index j, const Snapshot& s) {
    BicPathEntry e;
    e.tau = config.tau(j);
    e.theta = e.tau * out.theta0;
    e.p_nz = count_nonzero(s.values);
    e.bic = snapshot_bic(X, y, s);
    e.support = s.support;
    e.values = s.values;
    out.path.push_back(std::move(e));
  };
  auto refit = [&](Snapshot& s) {
    s.values = s.support.empty() ? Vector{} : linalg::refit_on_support(X, y, s.support, rank_tol);
  };

  if (out.theta0 == 0.0) {
    Snapshot s{IndexList(selected.begin(), selected.end()),
               Eigen::Map<const Vector>(stage1_values.data(), static_cast<Index>(stage1_values.size()))};
    record(0, s);
    out.best_beta = stage1_beta;
    out.best_bic = out.path.front().bic;
    for (std::size_t j = 0; j < s.support.size(); ++j) {
      if (s.values[static_cast<Index>(j)] != 0.0) out.best_support.push_back(s.support[j]);
    }
    return out;
  }

  Snapshot cur{IndexList(selected.begin(), selected.end()), Vector{}};
  refit(cur);
  record(0, cur);

  const Index last = config.grid_last();
  if (config.full_grid) {
    for (Index j = 1; j <= last; ++j) {
      prune_below(cur, config.tau(j) * out.theta0);
      refit(cur);
      record(j, cur);
    }
  } else {
    Index j = 0;
    while (!cur.support.empty()) {
      const double smallest = cur.values.cwiseAbs().minCoeff();
      // First grid point whose threshold exceeds the smallest magnitude; the
      // predicate matches prune_below exactly so no grid point is skipped.
      const double step_theta = config.tau_step * out.theta0;
      Index next = j + 1;
      if (step_theta > 0.0 && std::isfinite(smallest / step_theta)) {
        const double guess = std::floor(smallest / step_theta);
        if (guess > static_cast<double>(last)) break;
        next = std::max(next, static_cast<Index>(guess));
      }
      while (next > j + 1 && smallest < config.tau(next - 1) * out.theta0) --next;
      while (next <= last && !(smallest < config.tau(next) * out.theta0)) ++next;
      if (next > last) break;
      j = next;
      prune_below(cur, config.tau(j) * out.theta0);
      refit(cur);
      record(j, cur);
    }
  }
  std::size_t best = 0;
  for (std::size_t e = 1; e < out.path.size(); ++e) {
    if (out.path[e].bic < out.path[best].bic) best = e;
  }
  const BicPathEntry& b = out.path[best];
  out.best_tau = b.tau;
  out.best_bic = b.bic;
  out.best_beta = Vector::Zero(X.cols());
  for (std::size_t j = 0; j < b.support.size(); ++j) {
    const double v = b.values[static_cast<Index>(j)];
    if (v != 0.0) {
      out.best_beta[b.support[j]] = v;
      out.best_support.push_back(b.support[j]);
    }
  }
  return out;
}

}  // namespace assd::threshold
