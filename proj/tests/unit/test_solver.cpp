#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "assd/datagen.hpp"
#include "assd/metrics.hpp"
#include "assd/solver.hpp"
#include "support/random.hpp"

using namespace assd;
using assd::test::gaussian;

namespace {

SolverConfig config(Algorithm a, double sigma) {
  SolverConfig c;
  c.algorithm = a;
  c.sigma_known = sigma;
  return c;
}

}  // namespace

TEST(Algorithm, Parse) {
  EXPECT_EQ(parse_algorithm("ASSD"), Algorithm::assd);
  EXPECT_EQ(parse_algorithm("ssd1"), Algorithm::ssd1);
  EXPECT_EQ(parse_algorithm("Ssd"), Algorithm::ssd);
  EXPECT_THROW(parse_algorithm("lasso"), ConfigError);
  EXPECT_EQ(to_string(Algorithm::ssd1), "ssd1");
}

TEST(ResolveEta, Order) {
  SolverConfig c;
  c.sigma_known = 2.0;
  EXPECT_DOUBLE_EQ(resolve_eta(c, 100), 20.0);
  c.eta = 0.1;
  EXPECT_DOUBLE_EQ(resolve_eta(c, 100), 0.1);
  EXPECT_THROW(resolve_eta(SolverConfig{}, 100), ConfigError);
}

TEST(Solve, ZeroResponse) {
  const auto r = solve(gaussian(10, 30, 1), Vector::Zero(10), config(Algorithm::assd, 1.0));
  EXPECT_EQ(r.beta, Vector::Zero(30));
  EXPECT_TRUE(r.support.empty());
  EXPECT_EQ(r.stop_reason, decimate::StopReason::eta_hit);
  EXPECT_EQ(r.L_stage1, 0);
}

TEST(Solve, Errors) {
  EXPECT_THROW(solve(gaussian(10, 30, 1), Vector::Zero(9), config(Algorithm::ssd, 1.0)), ContractError);
  EXPECT_THROW(solve(gaussian(10, 30, 1), Vector::Zero(10), SolverConfig{}), ConfigError);
  SolverConfig c = config(Algorithm::ssd1, 1.0);
  c.l_max_override = 0;
  EXPECT_THROW(solve(gaussian(10, 30, 1), Vector::Ones(10), c), ConfigError);
  // SSD needs no noise level.
  SolverConfig naive;
  naive.algorithm = Algorithm::ssd;
  EXPECT_NO_THROW(solve(gaussian(10, 30, 1), Vector::Ones(10), naive));
}

TEST(Solve, StepBudgetOverride) {
  SolverConfig c = config(Algorithm::ssd1, 0.0);
  c.eta = 0.0;
  c.l_max_override = 4;
  const auto r = solve(gaussian(20, 50, 3), gaussian(20, 4), c);
  EXPECT_EQ(r.L_stage1, 4);
  EXPECT_EQ(r.stop_reason, decimate::StopReason::L_max_hit);
}

TEST(Solve, ResultShape) {
  const auto inst = datagen::gen_instance({datagen::IidGaussian{}, 60, 150},
                                          {6, datagen::CoeffLaw::signed_uniform, 0.5, 1.0, 0.0}, 0.5, 11);
  const auto r = solve(inst.X, inst.y, config(Algorithm::assd, 0.5));
  for (Index i = 0; i < r.beta.size(); ++i) {
    const bool in = std::find(r.support.begin(), r.support.end(), i) != r.support.end();
    EXPECT_EQ(in, r.beta[i] != 0.0);
  }
  EXPECT_GE(r.wall_time, 0.0);
  EXPECT_EQ(r.residual_trace.size(), static_cast<std::size_t>(r.L_stage1) + 1);
  EXPECT_FALSE(r.bic_path.empty());
  EXPECT_DOUBLE_EQ(r.eta, std::sqrt(60.0) * 0.5);
  EXPECT_EQ(r.stage1_beta.size(), 150);
}

TEST(Solve, AssdDropsFalsePositivesOfSsd1) {
  // 200×1000, 30 signed coefficients, σ = 1, early stop at 0.1.
  double fp_assd = 0.0, fp_ssd1 = 0.0, tp_assd = 0.0;
  const int runs = 5;
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    const auto inst = datagen::gen_instance({datagen::IidGaussian{}, 200, 1000},
                                            {30, datagen::CoeffLaw::signed_uniform, 0.5, 1.0, 0.0}, 1.0, seed);
    SolverConfig c = config(Algorithm::assd, 1.0);
    c.eta = 0.1;
    const auto a = solve(inst.X, inst.y, c);
    c.algorithm = Algorithm::ssd1;
    const auto b = solve(inst.X, inst.y, c);
    const auto ca = metrics::support_counts(a.beta, *inst.beta0);
    fp_assd += static_cast<double>(ca.fp);
    tp_assd += static_cast<double>(ca.tp);
    fp_ssd1 += static_cast<double>(metrics::support_counts(b.beta, *inst.beta0).fp);
  }
  EXPECT_LE(fp_assd / runs, 1.0);
  EXPECT_GE(tp_assd / runs, 29.0);
  EXPECT_GE(fp_ssd1 / runs, 3.0);
}

TEST(Solve, NaiveSsdOverfitsNoise) {
  const auto inst = datagen::gen_instance({datagen::IidGaussian{}, 200, 1000},
                                          {30, datagen::CoeffLaw::signed_uniform, 0.5, 1.0, 0.0}, 1.0, 3);
  SolverConfig c;
  c.algorithm = Algorithm::ssd;
  const auto r = solve(inst.X, inst.y, c);
  EXPECT_GT(metrics::support_counts(r.beta, *inst.beta0).fp, 50);
}

TEST(Solve, PipelineInvariants) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Index n = 30 + static_cast<Index>(seed % 20);
    const auto inst = datagen::gen_instance({datagen::IidGaussian{}, n, 3 * n},
                                            {4, datagen::CoeffLaw::signed_uniform, 0.5, 1.0, 0.0}, 0.4, seed);
    const auto a = solve(inst.X, inst.y, config(Algorithm::assd, 0.4));
    const auto b = solve(inst.X, inst.y, config(Algorithm::ssd1, 0.4));
    for (Index i : a.support) EXPECT_NE(std::find(b.support.begin(), b.support.end(), i), b.support.end());
    EXPECT_LE(threshold::bic_score(inst.y, inst.X, a.beta),
              threshold::bic_score(inst.y, inst.X, b.beta) * (1.0 + 1e-12) + 1e-12);
    const auto again = solve(inst.X, inst.y, config(Algorithm::assd, 0.4));
    EXPECT_EQ(again.beta, a.beta);
    EXPECT_EQ(again.support, a.support);
    EXPECT_EQ(again.L_stage1, a.L_stage1);
  }
}
