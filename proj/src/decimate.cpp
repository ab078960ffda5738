#include "assd/decimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace assd::decimate {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::eta_hit: return "eta_hit";
    case StopReason::L_max_hit: return "L_max_hit";
    case StopReason::l1_hit: return "l1_hit";
    case StopReason::dead_end: return "dead_end";
  }
  return "unknown";
}

StoppingRule StoppingRule::eta_l2(double eta, Index l_max) {
  if (!(eta >= 0.0)) throw InputError("eta must be nonnegative");
  if (l_max < 1) throw InputError("L_max must be at least 1");
  return {StopKind::eta_l2, eta, 1e-5, l_max};
}

StoppingRule StoppingRule::naive_l1(double l1_tol) {
  if (!(l1_tol >= 0.0)) throw InputError("l1 tolerance must be nonnegative");
  return {StopKind::naive_l1, 0.0, l1_tol, 1};
}

StoppingRule StoppingRule::step_budget(Index l_max) {
  if (l_max < 1) throw InputError("L_max must be at least 1");
  return {StopKind::step_budget_only, 0.0, 1e-5, l_max};
}

Index l_max_default(Index n) {
  if (n < 2) throw InputError("L_max needs n >= 2, got " + std::to_string(n));
  const auto l = static_cast<Index>(std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
  return std::max<Index>(l, 1);
}

DecimationState::DecimationState(const DenseMatrix& X, const Vector& y)
    : work_(X), residual_(y) {
  if (y.size() != X.rows()) {
    throw ContractError("decimation: y has length " + std::to_string(y.size()) + " but X has " +
                        std::to_string(X.rows()) + " rows");
  }
  linalg::require_finite(X, "decimation X");
  linalg::require_finite(y, "decimation y");

  const double max_norm = X.size() == 0 ? 0.0 : X.colwise().norm().maxCoeff();
  pivot_floor_ = linalg::kPivotFloorRel * max_norm;

  active_.resize(static_cast<std::size_t>(X.cols()));
  std::iota(active_.begin(), active_.end(), Index{0});

  gram_ = DenseMatrix::Zero(X.rows(), X.rows());
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(X);
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  drop_degenerate();
}

void DecimationState::drop_degenerate() {
  IndexList keep;
  keep.reserve(active_.size());
  for (Index c : active_) {
    if (work_.col(c).norm() > pivot_floor_) {
      keep.push_back(c);
    } else {
      gram_.noalias() -= work_.col(c) * work_.col(c).transpose();
      dropped_.push_back(c);
    }
  }
  active_.swap(keep);
}

linalg::GuidanceVector DecimationState::guidance(double rank_tol) const {
  const auto m = static_cast<Index>(active_.size());
  Vector gamma(m);
  if (auto z = linalg::solve_gram(gram_, residual_, std::max(rank_tol, linalg::kGramPivotGuard))) {
    for (Index j = 0; j < m; ++j) gamma[j] = work_.col(active_[static_cast<std::size_t>(j)]).dot(*z);
  } else {
    DenseMatrix xa(work_.rows(), m);
    for (Index j = 0; j < m; ++j) xa.col(j) = work_.col(active_[static_cast<std::size_t>(j)]);
    gamma = linalg::min_norm_least_squares_svd(xa, residual_, rank_tol);
  }
  return linalg::make_guidance(std::move(gamma), active_);
}

StepRecord DecimationState::record() const {
  StepRecord r;
  r.step = steps();
  r.selected = selected_.empty() ? Index{-1} : selected_.back();
  r.l1_per_n = residual_.lpNorm<1>() / static_cast<double>(residual_.size());
  r.l2 = residual_.norm();
  r.dropped_total = static_cast<Index>(dropped_.size());
  return r;
}

StepRecord decimation_step(DecimationState& s, double rank_tol) {
  if (s.active_.empty()) throw DeadEndError("decimation: no eligible column left");

  const linalg::GuidanceVector g = s.guidance(rank_tol);
  // Strict comparison over ascending indices keeps the lowest index on ties.
  std::size_t best = 0;
  for (std::size_t j = 1; j < s.active_.size(); ++j) {
    if (std::abs(g.values[static_cast<Index>(j)]) > std::abs(g.values[static_cast<Index>(best)])) best = j;
  }
  const Index k = s.active_[best];
  s.active_.erase(s.active_.begin() + static_cast<std::ptrdiff_t>(best));
  s.selected_.push_back(k);

  const Vector xk = s.work_.col(k);
  const double xkk = xk.squaredNorm();
  for (Index c : s.active_) {
    auto col = s.work_.col(c);
    col -= (col.dot(xk) / xkk) * xk;
  }
  s.residual_ -= (s.residual_.dot(xk) / xkk) * xk;

  // gram ← P·gram·P + xk·xkᵀ with P = I − q·qᵀ.
  const Vector q = xk / std::sqrt(xkk);
  const Vector gq = s.gram_ * q;
  const double qgq = q.dot(gq);
  s.gram_.noalias() -= q * gq.transpose();
  s.gram_.noalias() -= gq * q.transpose();
  s.gram_.noalias() += (qgq * q) * q.transpose();
  s.gram_.noalias() += xk * xk.transpose();

  s.drop_degenerate();
  return s.record();
}

namespace {

bool should_stop(const DecimationState& s, const StoppingRule& rule, Index cap, StopReason& why) {
  const Vector& r = s.residual();
  const Index n = r.size();
  switch (rule.kind) {
    case StopKind::eta_l2:
      if (r.norm() <= rule.eta) { why = StopReason::eta_hit; return true; }
      if (s.steps() >= std::min(rule.l_max, cap)) { why = StopReason::L_max_hit; return true; }
      break;
    case StopKind::naive_l1:
      if (r.lpNorm<1>() / static_cast<double>(n) < rule.l1_tol) { why = StopReason::l1_hit; return true; }
      if (s.steps() >= cap) { why = StopReason::L_max_hit; return true; }
      break;
    case StopKind::step_budget_only:
      if (s.steps() >= std::min(rule.l_max, cap)) { why = StopReason::L_max_hit; return true; }
      if (r.squaredNorm() == 0.0) { why = StopReason::dead_end; return true; }
      break;
  }
  if (s.active().empty()) { why = StopReason::dead_end; return true; }
  return false;
}

}  // namespace

DecimationResult run_decimation(const DenseMatrix& X, const Vector& y, const StoppingRule& rule,
                                double rank_tol) {
  DecimationState state(X, y);
  DecimationResult out;
  out.trace.push_back(state.record());
  const Index cap = std::min(X.rows(), X.cols());

  StopReason why = StopReason::dead_end;
  while (!should_stop(state, rule, cap, why)) {
    try {
      out.trace.push_back(decimation_step(state, rank_tol));
    } catch (const DeadEndError&) {
      why = StopReason::dead_end;
      break;
    }
  }
  out.stop_reason = why;
  out.selected = state.selected();
  out.dropped = static_cast<Index>(state.dropped().size());
  out.residual = state.residual();
  return out;
}

Stage1Result stage1_solve(const DenseMatrix& X, const Vector& y, const StoppingRule& rule,
                          double rank_tol) {
  Stage1Result out;
  out.decimation = run_decimation(X, y, rule, rank_tol);
  const IndexList& sel = out.decimation.selected;
  const Vector coef = linalg::refit_on_support(X, y, sel, rank_tol);
  out.beta = sel.empty() ? Vector(Vector::Zero(X.cols())) : linalg::scatter(sel, coef, X.cols());
  return out;
}

}  // namespace assd::decimate
