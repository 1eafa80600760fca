#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sacb/error.hpp"
#include "sacb/generators.hpp"
#include "sacb/sacb.hpp"
#include "sacb/sim.hpp"

using namespace sacb;

namespace {

SacbConfig small_config(double horizon = 2e4) {
  SacbConfig cfg;
  cfg.horizon = horizon;
  return cfg;
}

ProblemInstance silent_instance() {
  ProblemInstance inst;
  inst.f1 = [](std::span<const double>) { return 0.0; };
  inst.f2 = [](std::span<const double>) { return 0.0; };
  inst.covariates = CovariateSampler(1, 0.0);
  inst.noise = NoiseModel{NoiseKind::gaussian, 0.0};
  return inst;
}

RegretTrace run_until_handoff(const ProblemInstance& inst, SacbPolicy& p, std::int64_t horizon, std::uint64_t seed) {
  EpisodeOptions opts;
  opts.stop_after_handoff = true;
  opts.record_actions = true;
  return run_episode(inst, p, horizon, seed, opts);
}

}  // namespace

TEST(Sacb, BenchmarkLevels) {
  SacbPolicy p(small_config(2e6));
  EXPECT_EQ(p.levels().partition_level, 7);
  EXPECT_EQ(p.partition().per_axis(), 2);
  EXPECT_EQ(p.levels().max_round, 24);
  const double expected = 0.145 * std::pow(std::log(2e6), 1.75) / std::pow(1.1, 12);
  EXPECT_NEAR(std::pow(std::log(2e6), 1.75), 107.857, 1e-3);
  EXPECT_NEAR(std::pow(1.1, 12), 3.1384, 1e-4);
  EXPECT_NEAR(p.threshold(24), expected, 1e-12);
  EXPECT_NEAR(p.threshold(24), 4.9831, 1e-4);
}

TEST(Sacb, RoundTargets) {
  SacbPolicy p(small_config());
  EXPECT_EQ(p.round_target(1), 1);
  EXPECT_EQ(p.round_target(7), 2);
  EXPECT_EQ(p.round_target(24), 10);
}

TEST(Sacb, AlternationAndFirstRound) {
  SacbPolicy p(small_config());
  std::vector<double> x{0.1};
  EXPECT_EQ(p.choose(x), Arm::one);
  p.update(x, Arm::one, 0.3);
  EXPECT_EQ(p.choose(x), Arm::two);
  // the other bin is untouched
  EXPECT_EQ(p.choose(std::vector<double>{0.9}), Arm::one);
  p.update(x, Arm::two, 0.3);
  const std::size_t bin = p.partition().locate_index(x);
  EXPECT_EQ(p.bins()[bin].round, 2);
  ASSERT_EQ(p.history().size(), 1u);
  EXPECT_EQ(p.history()[0].round, 1);
  try {
    p.update(x, Arm::two, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::state_desync);
  }
}

TEST(Sacb, ZeroRewardsNeverFire) {
  const auto inst = silent_instance();
  SacbPolicy p(small_config());
  run_until_handoff(inst, p, 20000, 1);
  ASSERT_TRUE(p.handed_off());
  for (const auto& rec : p.history()) {
    EXPECT_EQ(rec.statistic, 0.0);
    EXPECT_FALSE(rec.fired);
  }
  for (const auto& b : p.bins()) EXPECT_FALSE(b.fired);
  EXPECT_EQ(*p.smoothness_estimate(), p.config().beta_hi);
}

TEST(Sacb, InfiniteThresholdClampsHigh) {
  const auto inst = make_power_payoff(0.6, 1.0);
  auto cfg = small_config();
  cfg.gamma = std::numeric_limits<double>::infinity();
  SacbPolicy p(cfg);
  run_until_handoff(inst, p, 20000, 3);
  ASSERT_TRUE(p.handed_off());
  for (const auto& b : p.bins()) EXPECT_FALSE(b.fired);
  EXPECT_GE(*p.raw_estimate(), cfg.beta_hi);
  EXPECT_EQ(*p.smoothness_estimate(), cfg.beta_hi);
}

TEST(Sacb, ZeroThresholdClampsLow) {
  const auto inst = make_power_payoff(0.6, 1.0);
  auto cfg = small_config();
  cfg.gamma = 0.0;
  SacbPolicy p(cfg);
  run_until_handoff(inst, p, 20000, 3);
  ASSERT_TRUE(p.handed_off());
  for (const auto& b : p.bins()) EXPECT_EQ(b.fired_round, 1);
  EXPECT_EQ(*p.smoothness_estimate(), cfg.beta_lo);
  EXPECT_GE(*p.estimation_end(), 2 * static_cast<std::int64_t>(p.bins().size()));
}

TEST(Sacb, EstimateInvertsRoundFormula) {
  // l = 1 and r_last = 1 with no under-smoothing: beta_hat = 1 / (2 l)
  auto cfg = small_config(1e4);
  cfg.base = 2.0;
  cfg.beta_lo = 0.25;
  cfg.upsilon = 0.0;
  cfg.gamma = 0.0;
  SacbPolicy p(cfg);
  ASSERT_EQ(p.levels().partition_level, 1);
  run_until_handoff(make_power_payoff(0.6, 1.0), p, 10000, 5);
  ASSERT_TRUE(p.handed_off());
  EXPECT_EQ(*p.raw_estimate(), 0.5);
  EXPECT_EQ(*p.smoothness_estimate(), 0.5);
}

TEST(Sacb, InvariantsDuringEstimation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = make_power_payoff(0.6, 1.0);
    SacbPolicy p(small_config());
    bool was_handed_off = false;
    std::optional<double> first_estimate;
    EpisodeOptions opts;
    opts.observer = [&](std::int64_t, std::span<const double>, Arm, const Policy&) {
      if (!p.handed_off()) {
        EXPECT_FALSE(was_handed_off);
        for (const auto& b : p.bins()) EXPECT_LE(std::abs(b.counts[0] - b.counts[1]), 1);
        EXPECT_FALSE(p.smoothness_estimate().has_value());
      } else {
        if (!was_handed_off) first_estimate = p.smoothness_estimate();
        was_handed_off = true;
        EXPECT_EQ(p.smoothness_estimate(), first_estimate);
        EXPECT_GE(*p.smoothness_estimate(), p.config().beta_lo);
        EXPECT_LE(*p.smoothness_estimate(), p.config().beta_hi);
      }
    };
    run_episode(inst, p, 20000, seed, opts);
    EXPECT_TRUE(was_handed_off);
  }
}

TEST(Sacb, DelegatesAfterHandoff) {
  const auto inst = make_setting_two(0.5, 2e6);
  auto cfg = small_config();
  double seen_beta = 0.0, seen_horizon = 0.0;
  cfg.factory = [&](double beta, double horizon) -> std::unique_ptr<Policy> {
    seen_beta = beta;
    seen_horizon = horizon;
    return std::make_unique<AbsePolicy>(AbseConfig{.beta = beta, .horizon = horizon});
  };
  SacbPolicy p(cfg);
  run_episode(inst, p, 20000, 9);
  ASSERT_TRUE(p.handed_off());
  EXPECT_EQ(seen_beta, *p.smoothness_estimate());
  EXPECT_EQ(seen_horizon, 2e4);
  const auto* abse = dynamic_cast<const AbsePolicy*>(p.delegate());
  ASSERT_NE(abse, nullptr);
  EXPECT_GT(abse->nodes()[0].stats[0].count, 0);

  cfg.handoff = HandoffHorizon::remaining;
  SacbPolicy q(cfg);
  const auto t = run_until_handoff(inst, q, 20000, 9);
  EXPECT_EQ(seen_horizon, 2e4 - static_cast<double>(*t.estimation_end));
}

TEST(Sacb, ChoiceAfterHandoffIsDelegateChoice) {
  const auto inst = make_setting_two(0.5, 2e6);
  auto cfg = small_config();
  Policy* inner = nullptr;
  cfg.factory = [&](double beta, double horizon) -> std::unique_ptr<Policy> {
    auto made = std::make_unique<AbsePolicy>(AbseConfig{.beta = beta, .horizon = horizon});
    inner = made.get();
    return made;
  };
  SacbPolicy p(cfg);
  run_episode(inst, p, 20000, 2);
  ASSERT_NE(inner, nullptr);
  for (double x : {0.0, 0.3, 0.77, 1.0}) {
    std::vector<double> v{x};
    EXPECT_EQ(p.choose(v), inner->choose(v));
  }
}

TEST(Sacb, ReplayIsIdentical) {
  const auto inst = make_power_payoff(0.6, 1.0);
  SacbPolicy a(small_config(2e6)), b(small_config(2e6));
  const auto ta = run_until_handoff(inst, a, 2000000, 42);
  const auto tb = run_until_handoff(inst, b, 2000000, 42);
  EXPECT_EQ(ta.actions, tb.actions);
  EXPECT_EQ(ta.estimation_end, tb.estimation_end);
  EXPECT_EQ(*a.raw_estimate(), *b.raw_estimate());
  EXPECT_EQ(a.history().size(), b.history().size());
}

TEST(Sacb, StatisticBoundedByRewardRange) {
  auto cfg = small_config();
  cfg.gamma = std::numeric_limits<double>::infinity();
  SacbPolicy p(cfg);
  const auto inst = make_power_payoff(1.0, 1.0);
  EpisodeOptions opts;
  opts.stop_after_handoff = true;
  run_episode(inst, p, 20000, 8, opts);
  for (const auto& rec : p.history()) {
    EXPECT_GE(rec.statistic, 0.0);
    EXPECT_LE(rec.statistic, 1.0);
    EXPECT_EQ(rec.threshold, p.threshold(rec.round));
  }
}

TEST(Sacb, OversizedMeshRejectedUpFront) {
  auto cfg = small_config(1e4);
  cfg.d = 2;
  cfg.beta_lo = 0.3;
  EXPECT_THROW(SacbPolicy{cfg}, std::invalid_argument);
}
