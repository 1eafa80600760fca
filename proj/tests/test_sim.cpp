#include <gtest/gtest.h>

#include <cmath>

#include "sacb/abse.hpp"
#include "sacb/baselines.hpp"
#include "sacb/generators.hpp"
#include "sacb/rng.hpp"
#include "sacb/sacb.hpp"
#include "sacb/sim.hpp"

using namespace sacb;

namespace {

ProblemInstance linear_gap() {
  ProblemInstance inst;
  inst.f1 = [](std::span<const double> x) { return x[0]; };
  inst.f2 = [](std::span<const double>) { return 0.5; };
  inst.covariates = CovariateSampler(1, 0.0);
  return inst;
}

PolicySpec abse_spec(double beta) {
  return {"ABSE", [beta](const ProblemInstance&, double horizon) -> std::unique_ptr<Policy> {
            return std::make_unique<AbsePolicy>(AbseConfig{.beta = beta, .confidence_scale = 2.0, .horizon = horizon});
          }};
}

PolicySpec sacb_spec() {
  return {"SACB", [](const ProblemInstance&, double horizon) -> std::unique_ptr<Policy> {
            SacbConfig cfg;
            cfg.horizon = horizon;
            return std::make_unique<SacbPolicy>(cfg);
          }};
}

RegretTrace trace_with_regret(double r) {
  RegretTrace t;
  t.regret = r;
  return t;
}

}  // namespace

TEST(Rng, Streams) {
  EXPECT_EQ(rng::draw_bits(1, 2, rng::Purpose::noise, 0), rng::draw_bits(1, 2, rng::Purpose::noise, 0));
  EXPECT_NE(rng::draw_bits(1, 2, rng::Purpose::noise, 0), rng::draw_bits(1, 2, rng::Purpose::noise, 1));
  EXPECT_NE(rng::draw_bits(1, 2, rng::Purpose::noise, 0), rng::draw_bits(1, 2, rng::Purpose::covariate, 0));
  EXPECT_NE(rng::replication_seed(1, 0), rng::replication_seed(1, 1));
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const double u = rng::uniform(5, t, rng::Purpose::policy, 0);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng::standard_normal(5, t, rng::Purpose::noise, 0);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.015);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Episode, IdenticalArmsGiveZeroRegret) {
  ProblemInstance inst = linear_gap();
  inst.f2 = inst.f1;
  FixedArmPolicy fixed(Arm::two);
  EXPECT_EQ(run_episode(inst, fixed, 10000, 1).regret, 0.0);
  AbsePolicy abse(AbseConfig{.beta = 1.0, .horizon = 1e4});
  EXPECT_EQ(run_episode(inst, abse, 10000, 1).regret, 0.0);
}

TEST(Episode, OracleHasZeroRegret) {
  const auto inst = make_setting_two(0.5, 2e6);
  OraclePolicy oracle(inst);
  const auto t = run_episode(inst, oracle, 100000, 3);
  EXPECT_EQ(t.regret, 0.0);
  EXPECT_EQ(t.inferior, 0);
}

TEST(Episode, FixedArmRegretMatchesIntegral) {
  const auto inst = linear_gap();
  FixedArmPolicy fixed(Arm::one);
  const std::int64_t horizon = 1000000;
  const auto t = run_episode(inst, fixed, horizon, 11);
  const double sd = std::sqrt(horizon * (1.0 / 24.0 - 1.0 / 64.0));
  EXPECT_NEAR(t.regret, horizon / 8.0, 3.0 * sd);
  EXPECT_NEAR(static_cast<double>(t.inferior), horizon / 2.0, 3.0 * std::sqrt(horizon * 0.25));
}

TEST(Episode, CheckpointsMonotone) {
  const auto inst = make_setting_two(0.5, 2e6);
  AbsePolicy p(AbseConfig{.beta = 0.5, .confidence_scale = 2.0, .horizon = 5e4});
  const auto t = run_episode(inst, p, 50000, 4);
  ASSERT_EQ(t.checkpoints.size(), 100u);
  EXPECT_EQ(t.checkpoints.back().t, 50000);
  EXPECT_EQ(t.checkpoints.back().regret, t.regret);
  for (std::size_t k = 1; k < t.checkpoints.size(); ++k) {
    EXPECT_GE(t.checkpoints[k].regret, t.checkpoints[k - 1].regret);
    EXPECT_GE(t.checkpoints[k].inferior, t.checkpoints[k - 1].inferior);
  }
  EXPECT_GE(t.checkpoints.front().regret, 0.0);
}

TEST(Episode, StopAfterHandoff) {
  const auto inst = make_power_payoff(0.6, 1.0);
  SacbConfig cfg;
  cfg.horizon = 2e6;
  SacbPolicy p(cfg);
  EpisodeOptions opts;
  opts.stop_after_handoff = true;
  const auto t = run_episode(inst, p, 2000000, 6, opts);
  ASSERT_TRUE(t.estimation_end.has_value());
  EXPECT_EQ(t.steps, *t.estimation_end);
  EXPECT_TRUE(t.beta_hat.has_value());
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  const auto inst = make_setting_two(0.5, 2e6);
  std::vector<PolicySpec> specs{abse_spec(0.5), sacb_spec()};
  ExperimentSpec one{.horizon = 20000, .reps = 4, .base_seed = 7, .threads = 1};
  one.episode.record_actions = true;
  ExperimentSpec many = one;
  many.threads = 3;
  const auto a = run_experiment(inst, specs, one);
  const auto b = run_experiment(inst, specs, many);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    for (int r = 0; r < 4; ++r) {
      EXPECT_EQ(a[p].traces[r].regret, b[p].traces[r].regret);
      EXPECT_EQ(a[p].traces[r].actions, b[p].traces[r].actions);
      EXPECT_EQ(a[p].traces[r].seed, rng::replication_seed(7, r));
    }
  }
}

TEST(Experiment, PairedStreams) {
  const auto inst = make_setting_two(0.5, 2e6);
  std::vector<PolicySpec> specs{abse_spec(0.5), abse_spec(0.5)};
  const auto res = run_experiment(inst, specs, ExperimentSpec{.horizon = 20000, .reps = 3});
  const auto s1 = summarize("a", res[0].traces);
  const auto s2 = summarize("a", res[1].traces);
  EXPECT_EQ(s1.mean_regret, s2.mean_regret);
  EXPECT_EQ(s1.sd, s2.sd);
  EXPECT_EQ(s1.mean_curve.size(), s2.mean_curve.size());
}

TEST(Experiment, FailurePropagates) {
  const auto inst = make_setting_two(0.5, 2e6);
  std::vector<PolicySpec> specs{{"bad", [](const ProblemInstance&, double) -> std::unique_ptr<Policy> {
                                   throw std::runtime_error("boom");
                                 }}};
  EXPECT_THROW(run_experiment(inst, specs, ExperimentSpec{.horizon = 10, .reps = 2, .threads = 2}),
               std::runtime_error);
}

TEST(Summary, Examples) {
  std::vector<RegretTrace> one{trace_with_regret(5.0)};
  const auto s = summarize("x", one);
  EXPECT_EQ(s.mean_regret, 5.0);
  EXPECT_FALSE(s.ci95.has_value());

  std::vector<RegretTrace> three{trace_with_regret(1.0), trace_with_regret(2.0), trace_with_regret(3.0)};
  const auto t = summarize("x", three);
  EXPECT_DOUBLE_EQ(t.mean_regret, 2.0);
  EXPECT_DOUBLE_EQ(t.sd, 1.0);

  std::vector<RegretTrace> forty;
  for (int k = 0; k < 40; ++k) forty.push_back(trace_with_regret(k * k));
  const auto f = summarize("x", forty);
  ASSERT_TRUE(f.ci95.has_value());
  EXPECT_DOUBLE_EQ(*f.ci95, 1.96 * f.sd / std::sqrt(40.0));
}

TEST(Summary, EstimatorFields) {
  std::vector<RegretTrace> traces(3);
  traces[0].estimation_end = 100;
  traces[0].beta_hat = 0.5;
  traces[1].estimation_end = 200;
  traces[1].beta_hat = 1.0;
  traces[2].estimation_end = 300;
  traces[2].beta_hat = 1.0;
  const auto s = summarize("SACB", traces);
  EXPECT_DOUBLE_EQ(*s.mean_estimation_end, 200.0);
  EXPECT_DOUBLE_EQ(*s.mean_beta_hat, 2.5 / 3.0);
  EXPECT_EQ(s.beta_hat_histogram.at(1.0), 2);
  EXPECT_EQ(s.beta_hat_histogram.at(0.5), 1);
}
