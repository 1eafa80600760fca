#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sacb/abse.hpp"
#include "sacb/partition.hpp"
#include "sacb/policy.hpp"

namespace sacb {

// Builds the exploitation policy once the smoothness estimate is known.
using PolicyFactory = std::function<std::unique_ptr<Policy>(double beta, double horizon)>;

PolicyFactory abse_factory(double c0, double confidence_scale, int d,
                           TerminalRule terminal = TerminalRule::commit_to_leader);

enum class HandoffHorizon { full, remaining };

struct SacbConfig {
  double beta_lo = 0.4;
  double beta_hi = 1.0;
  double gamma = 0.145;
  double base = 1.1;
  double upsilon = 0.325;
  double horizon = 1e6;
  int d = 1;
  HandoffHorizon handoff = HandoffHorizon::full;
  PolicyFactory factory;  // defaults to ABSE with c0 = 2 and confidence scale 2
};

// Smoothness-adaptive policy: a round-based test per bin of a fixed
// partition estimates the smoothness, then hands over to `factory`.
class SacbPolicy final : public Policy {
 public:
  struct BinState {
    int round = 1;
    std::array<std::int64_t, 2> counts{};
    std::array<std::vector<double>, 2> xs;  // current round only
    std::array<std::vector<double>, 2> ys;
    bool fired = false;
    int fired_round = 0;
    bool done = false;
  };

  struct RoundRecord {
    std::size_t bin = 0;
    int round = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    bool fired = false;
  };

  explicit SacbPolicy(SacbConfig config);

  Arm choose(std::span<const double> x) override;
  void update(std::span<const double> x, Arm arm, double reward) override;
  std::string name() const override { return "SACB"; }
  std::optional<std::int64_t> estimation_end() const override { return handoff_step_; }
  std::optional<double> smoothness_estimate() const override { return beta_hat_; }

  const SacbConfig& config() const { return config_; }
  const SacbLevels& levels() const { return levels_; }
  const Partition& partition() const { return partition_; }
  const std::vector<BinState>& bins() const { return bins_; }
  const std::vector<RoundRecord>& history() const { return history_; }
  std::optional<double> raw_estimate() const { return raw_beta_hat_; }
  const Policy* delegate() const { return delegate_.get(); }
  bool handed_off() const { return delegate_ != nullptr; }

  std::int64_t round_target(int round) const;  // samples per arm in a round
  double threshold(int round) const;
  double statistic(std::size_t bin) const;  // sup over arms and mesh of the estimate gap

 private:
  void finish_round(std::size_t bin);
  void hand_off();

  SacbConfig config_;
  SacbLevels levels_;
  Partition partition_;
  int degree_;
  double threshold_scale_;
  std::vector<BinState> bins_;
  std::vector<std::optional<std::vector<Point>>> mesh_;
  std::vector<RoundRecord> history_;
  std::size_t done_bins_ = 0;
  std::int64_t step_ = 0;
  std::optional<std::int64_t> handoff_step_;
  std::optional<double> raw_beta_hat_;
  std::optional<double> beta_hat_;
  std::unique_ptr<Policy> delegate_;
};

}  // namespace sacb
