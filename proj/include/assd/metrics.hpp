#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "assd/linalg.hpp"
#include "assd/types.hpp"

namespace assd::metrics {

/// ‖β − β⁰‖₂ / ‖β⁰‖₂. Throws UndefinedMetricError when β⁰ = 0.
double relative_error(const Vector& beta, const Vector& beta0);

struct SupportCounts {
  Index tp = 0;
  Index fp = 0;
};

/// Entries with |β_i| > zero_tol, split by whether β⁰_i is nonzero.
SupportCounts support_counts(const Vector& beta, const Vector& beta0, double zero_tol = 0.0);

struct QPoint {
  Index r = 0;
  double q = 0.0;
};

/// Fraction of true nonzeros among the r top-ranked guidance entries, r = 1..len.
std::vector<QPoint> q_curve(const linalg::GuidanceVector& guidance, const Vector& beta0);

struct TrialRecord {
  std::uint64_t seed = 0;
  double re = 0.0;
  Index tp = 0;
  Index fp = 0;
  bool exact_recovery = false;
  double wall_time = 0.0;
  Index L_stage1 = 0;
  std::string stop_reason;
};

/// Fills re/tp/fp/exact_recovery of a trial; `truth` marks the planted
/// support by its nonzero entries, `beta0` is used for the relative error.
TrialRecord make_trial_record(std::uint64_t seed, const Vector& beta, const Vector& beta0,
                              const Vector& truth, double wall_time, Index L_stage1,
                              std::string stop_reason);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct Summary {
  Index count = 0;
  bool single_record = false;  // sd reported as 0 by convention
  MeanSd tp, fp, re, time;
  double recovery_prob = 0.0;
};

/// Mean, (N−1)-normalized standard deviation and exact-recovery fraction.
/// Throws InputError on an empty input.
Summary aggregate(std::span<const TrialRecord> records);

}  // namespace assd::metrics
