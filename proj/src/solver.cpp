#include "assd/solver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>

namespace assd {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ssd: return "ssd";
    case Algorithm::ssd1: return "ssd1";
    case Algorithm::assd: return "assd";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ssd") return Algorithm::ssd;
  if (lower == "ssd1") return Algorithm::ssd1;
  if (lower == "assd") return Algorithm::assd;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected ssd, ssd1 or assd)");
}

double resolve_eta(const SolverConfig& config, Index n) {
  if (config.eta) {
    if (!(*config.eta >= 0.0)) throw ConfigError("eta must be nonnegative");
    return *config.eta;
  }
  if (config.sigma_known) {
    if (!(*config.sigma_known >= 0.0)) throw ConfigError("sigma must be nonnegative");
    return std::sqrt(static_cast<double>(n)) * *config.sigma_known;
  }
  throw ConfigError("early stop needs eta or a known noise level sigma");
}

SolveResult solve(const DenseMatrix& X, const Vector& y, const SolverConfig& config) {
  if (y.size() != X.rows()) {
    throw ContractError("solve: y has " + std::to_string(y.size()) + " entries but X has " +
                        std::to_string(X.rows()) + " rows");
  }
  if (config.l_max_override && *config.l_max_override < 1) {
    throw ConfigError("L_max override must be at least 1");
  }

  const auto start = std::chrono::steady_clock::now();
  SolveResult out;

  decimate::StoppingRule rule;
  if (config.algorithm == Algorithm::ssd) {
    rule = decimate::StoppingRule::naive_l1(config.l1_tol);
  } else {
    out.eta = resolve_eta(config, X.rows());
    const Index l_max = config.l_max_override ? *config.l_max_override
                                              : decimate::l_max_default(std::max<Index>(X.rows(), 2));
    rule = decimate::StoppingRule::eta_l2(out.eta, l_max);
  }

  decimate::Stage1Result stage1 = decimate::stage1_solve(X, y, rule, config.rank_tol);
  out.L_stage1 = static_cast<Index>(stage1.decimation.selected.size());
  out.residual_trace = std::move(stage1.decimation.trace);
  out.stop_reason = stage1.decimation.stop_reason;
  if (stage1.decimation.stop_reason == decimate::StopReason::dead_end) {
    out.warnings.emplace_back("decimation reached a dead end after " + std::to_string(out.L_stage1) +
                              " steps");
  }

  const IndexList& selected = stage1.decimation.selected;
  if (config.algorithm == Algorithm::assd) {
    threshold::ThresholdConfig tc;
    tc.R = config.R;
    tc.tau_step = config.tau_step;
    tc.sigma_hat_on_abs = config.sigma_hat_on_abs;
    threshold::SweepResult sweep =
        threshold::threshold_sweep(X, y, stage1.beta, selected, tc, config.rank_tol);
    out.beta = std::move(sweep.best_beta);
    out.bic_path = std::move(sweep.path);
    out.sigma_hat = sweep.sigma_hat;
    out.theta0 = sweep.theta0;
    out.warnings.insert(out.warnings.end(), sweep.warnings.begin(), sweep.warnings.end());
  } else {
    out.beta = stage1.beta;
  }
  for (Index c : selected) {
    if (out.beta[c] != 0.0) out.support.push_back(c);
  }
  out.stage1_beta = std::move(stage1.beta);

  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace assd
