#include "assd/metrics.hpp"

#include <cmath>

namespace assd::metrics {

double relative_error(const Vector& beta, const Vector& beta0) {
  if (beta.size() != beta0.size()) throw ContractError("relative_error: length mismatch");
  const double denom = beta0.norm();
  if (!(denom > 0.0)) throw UndefinedMetricError("relative_error: true coefficient vector is zero");
  return (beta - beta0).norm() / denom;
}

SupportCounts support_counts(const Vector& beta, const Vector& beta0, double zero_tol) {
  if (beta.size() != beta0.size()) throw ContractError("support_counts: length mismatch");
  SupportCounts c;
  for (Index i = 0; i < beta.size(); ++i) {
    if (std::abs(beta[i]) > zero_tol) {
      if (beta0[i] != 0.0) ++c.tp;
      else ++c.fp;
    }
  }
  return c;
}

std::vector<QPoint> q_curve(const linalg::GuidanceVector& guidance, const Vector& beta0) {
  std::vector<QPoint> out;
  out.reserve(guidance.ranking.size());
  Index hits = 0;
  Index r = 0;
  for (Index pos : guidance.ranking) {
    const Index col = guidance.columns[static_cast<std::size_t>(pos)];
    if (col < 0 || col >= beta0.size()) throw ContractError("q_curve: column outside beta0");
    if (beta0[col] != 0.0) ++hits;
    ++r;
    out.push_back({r, static_cast<double>(hits) / static_cast<double>(r)});
  }
  return out;
}

TrialRecord make_trial_record(std::uint64_t seed, const Vector& beta, const Vector& beta0,
                              const Vector& truth, double wall_time, Index L_stage1,
                              std::string stop_reason) {
  TrialRecord t;
  t.seed = seed;
  t.re = relative_error(beta, beta0);
  const SupportCounts c = support_counts(beta, truth);
  t.tp = c.tp;
  t.fp = c.fp;
  const Index s0 = static_cast<Index>((truth.array() != 0.0).count());
  t.exact_recovery = c.tp == s0 && c.fp == 0;
  t.wall_time = wall_time;
  t.L_stage1 = L_stage1;
  t.stop_reason = std::move(stop_reason);
  return t;
}

namespace {

template <typename Get>
MeanSd mean_sd(std::span<const TrialRecord> records, Get get) {
  const double n = static_cast<double>(records.size());
  double sum = 0.0;
  for (const auto& r : records) sum += get(r);
  MeanSd out;
  out.mean = sum / n;
  if (records.size() > 1) {
    double ss = 0.0;
    for (const auto& r : records) ss += (get(r) - out.mean) * (get(r) - out.mean);
    out.sd = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

}  // namespace

Summary aggregate(std::span<const TrialRecord> records) {
  if (records.empty()) throw InputError("aggregate: no records");
  Summary s;
  s.count = static_cast<Index>(records.size());
  s.single_record = records.size() == 1;
  s.tp = mean_sd(records, [](const TrialRecord& r) { return static_cast<double>(r.tp); });
  s.fp = mean_sd(records, [](const TrialRecord& r) { return static_cast<double>(r.fp); });
  s.re = mean_sd(records, [](const TrialRecord& r) { return r.re; });
  s.time = mean_sd(records, [](const TrialRecord& r) { return r.wall_time; });
  Index exact = 0;
  for (const auto& r : records) exact += r.exact_recovery ? 1 : 0;
  s.recovery_prob = static_cast<double>(exact) / static_cast<double>(records.size());
  return s;
}

}  // namespace assd::metrics
