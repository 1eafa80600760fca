#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sacb/policy.hpp"

namespace sacb {

enum class TerminalRule {
  keep_eliminating,  // bins at maximal depth run elimination until the horizon
  commit_to_leader,  // bins at maximal depth commit to the empirical leader at the end of their lifetime
};

struct AbseConfig {
  double beta = 1.0;
  double c0 = 2.0;
  double confidence_scale = 1.0;  // multiplies the elimination threshold
  double horizon = 1e6;
  int d = 1;
  TerminalRule terminal = TerminalRule::commit_to_leader;
};

// Adaptively binned successive elimination over a dyadic tree of [0,1]^d.
class AbsePolicy final : public Policy {
 public:
  enum class BinState : std::uint8_t { live, split, committed };

  struct ArmStats {
    std::int64_t count = 0;
    double mean = 0.0;
  };

  struct Node {
    std::vector<int> coords;  // position among the 2^depth cells per axis
    int depth = 0;
    BinState state = BinState::live;
    Arm committed_arm = Arm::one;
    std::array<ArmStats, 2> stats{};
    std::int64_t lifetime = 0;
    std::int64_t first_child = -1;
    std::vector<double> mid;  // split points, set once the bin splits
  };

  explicit AbsePolicy(AbseConfig config);

  Arm choose(std::span<const double> x) override;
  void update(std::span<const double> x, Arm arm, double reward) override;
  std::string name() const override;

  const AbseConfig& config() const { return config_; }
  int max_depth() const { return max_depth_; }
  std::int64_t lifetime(int depth) const;
  double threshold(int depth, std::int64_t samples) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  // Index of the leaf (live or committed) containing x.
  std::size_t leaf_of(std::span<const double> x) const;
  Box bounds(const Node& n) const;

 private:
  void split(std::size_t index);
  double log_term(int depth) const;

  AbseConfig config_;
  int max_depth_;
  std::vector<Node> nodes_;
  std::vector<std::int64_t> lifetimes_;
  std::vector<double> log_terms_;
  std::size_t cached_leaf_ = 0;
  std::vector<double> cached_x_;
};

// Depth of the finest bins for a smoothness parameter and horizon.
int abse_max_depth(double beta, double horizon, int d);

}  // namespace sacb
