#include "sacb/abse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sacb/error.hpp"

namespace sacb {

int abse_max_depth(double beta, double horizon, int d) {
  if (!(horizon > std::numbers::e)) throw Error(ErrorKind::horizon_too_small, "horizon must exceed e");
  const double k = std::log(horizon / std::log(horizon)) / ((2.0 * beta + d) * std::numbers::ln2);
  return std::max(0, static_cast<int>(std::ceil(k)));
}

AbsePolicy::AbsePolicy(AbseConfig config) : config_(config) {
  if (!(config_.beta > 0.0 && config_.beta <= 1.0)) throw std::invalid_argument("ABSE: beta must lie in (0,1]");
  if (!(config_.c0 > 0.0)) throw std::invalid_argument("ABSE: c0 must be positive");
  if (!(config_.confidence_scale > 0.0)) throw std::invalid_argument("ABSE: confidence scale must be positive");
  if (config_.d < 1) throw std::invalid_argument("ABSE: d must be >= 1");
  max_depth_ = abse_max_depth(config_.beta, config_.horizon, config_.d);
  lifetimes_.resize(static_cast<std::size_t>(max_depth_) + 1);
  for (int k = 0; k <= max_depth_; ++k) log_terms_.push_back(log_term(k));
  for (int k = 0; k <= max_depth_; ++k) {
    const double raw = std::exp2(2.0 * config_.beta * k) * log_term(k) / (config_.c0 * config_.c0);
    lifetimes_[k] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
  }
  Node root;
  root.coords.assign(config_.d, 0);
  root.lifetime = lifetimes_[0];
  nodes_.push_back(std::move(root));
}

double AbsePolicy::log_term(int depth) const {
  return std::log(config_.horizon) + (2.0 * config_.beta + config_.d) * depth * std::numbers::ln2;
}

std::int64_t AbsePolicy::lifetime(int depth) const { return lifetimes_.at(static_cast<std::size_t>(depth)); }

double AbsePolicy::threshold(int depth, std::int64_t samples) const {
  return config_.confidence_scale * 2.0 *
         std::sqrt(log_terms_.at(static_cast<std::size_t>(depth)) / static_cast<double>(samples));
}

std::size_t AbsePolicy::leaf_of(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes_[i].state == BinState::split) {
    const Node& n = nodes_[i];
    std::size_t offset = 0;
    for (int a = 0; a < config_.d; ++a) offset = offset * 2 + (x[a] >= n.mid[a] ? 1 : 0);
    i = static_cast<std::size_t>(n.first_child) + offset;
  }
  return i;
}

Box AbsePolicy::bounds(const Node& n) const {
  Box b{std::vector<double>(config_.d), std::vector<double>(config_.d)};
  const double side = std::exp2(-n.depth);
  for (int a = 0; a < config_.d; ++a) {
    b.lo[a] = n.coords[a] * side;
    b.hi[a] = (n.coords[a] + 1) * side;
  }
  return b;
}

Arm AbsePolicy::choose(std::span<const double> x) {
  cached_leaf_ = leaf_of(x);
  cached_x_.assign(x.begin(), x.end());
  const Node& n = nodes_[cached_leaf_];
  if (n.state == BinState::committed) return n.committed_arm;
  return n.stats[1].count < n.stats[0].count ? Arm::two : Arm::one;
}

void AbsePolicy::split(std::size_t index) {
  const int children = 1 << config_.d;
  const auto first = static_cast<std::int64_t>(nodes_.size());
  const std::vector<int> parent_coords = nodes_[index].coords;
  const int depth = nodes_[index].depth + 1;
  for (int c = 0; c < children; ++c) {
    Node child;
    child.depth = depth;
    child.coords.resize(config_.d);
    for (int a = 0; a < config_.d; ++a) {
      const int bit = (c >> (config_.d - 1 - a)) & 1;
      child.coords[a] = 2 * parent_coords[a] + bit;
    }
    child.lifetime = lifetimes_[depth];
    nodes_.push_back(std::move(child));
  }
  Node& parent = nodes_[index];
  parent.state = BinState::split;
  parent.first_child = first;
  parent.mid.resize(config_.d);
  for (int a = 0; a < config_.d; ++a) parent.mid[a] = std::ldexp(2.0 * parent_coords[a] + 1.0, -depth);
}

void AbsePolicy::update(std::span<const double> x, Arm arm, double reward) {
  const bool same = std::equal(x.begin(), x.end(), cached_x_.begin(), cached_x_.end());
  const std::size_t i = same && nodes_[cached_leaf_].state != BinState::split ? cached_leaf_ : leaf_of(x);
  Node& n = nodes_[i];
  if (n.state == BinState::committed) {
    if (arm != n.committed_arm) throw Error(ErrorKind::state_desync, "reward for an eliminated arm");
    return;
  }
  ArmStats& s = n.stats[index_of(arm)];
  ++s.count;
  s.mean += (reward - s.mean) / static_cast<double>(s.count);

  const ArmStats& a = n.stats[0];
  const ArmStats& b = n.stats[1];
  if (a.count != b.count) {
    if (std::abs(a.count - b.count) > 1) throw Error(ErrorKind::state_desync, "arms out of alternation");
    return;
  }
  const std::int64_t samples = a.count;
  const double lead = a.mean - b.mean;
  const double eps = threshold(n.depth, samples);
  if (lead > eps) {
    n.state = BinState::committed;
    n.committed_arm = Arm::one;
  } else if (-lead > eps) {
    n.state = BinState::committed;
    n.committed_arm = Arm::two;
  } else if (samples >= n.lifetime) {
    if (n.depth < max_depth_) {
      split(i);
    } else if (config_.terminal == TerminalRule::commit_to_leader) {
      n.state = BinState::committed;
      n.committed_arm = lead >= 0.0 ? Arm::one : Arm::two;
    }
  }
}

std::string AbsePolicy::name() const {
  std::ostringstream os;
  os << "ABSE(" << config_.beta << ")";
  return os.str();
}

}  // namespace sacb
