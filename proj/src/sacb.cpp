#include "sacb/sacb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sacb/error.hpp"
#include "sacb/local_poly.hpp"
#include "sacb/multi_index.hpp"

namespace sacb {

PolicyFactory abse_factory(double c0, double confidence_scale, int d, TerminalRule terminal) {
  return [=](double beta, double horizon) -> std::unique_ptr<Policy> {
    AbseConfig cfg;
    cfg.beta = beta;
    cfg.c0 = c0;
    cfg.confidence_scale = confidence_scale;
    cfg.horizon = horizon;
    cfg.d = d;
    cfg.terminal = terminal;
    return std::make_unique<AbsePolicy>(cfg);
  };
}

SacbPolicy::SacbPolicy(SacbConfig config)
    : config_(std::move(config)),
      levels_(sacb_levels(config_.horizon, config_.d, config_.base, config_.beta_lo, config_.beta_hi, config_.upsilon)),
      partition_(config_.d, config_.base, levels_.partition_level),
      degree_(holder_floor(config_.beta_hi)) {
  if (config_.gamma < 0.0) throw std::invalid_argument("SACB: gamma must be non-negative");
  if (!config_.factory) config_.factory = abse_factory(2.0, 2.0, config_.d);
  threshold_scale_ =
      config_.gamma * std::pow(std::log(config_.horizon), config_.d / (2.0 * config_.beta_lo) + 0.5);
  const double per_bin = static_cast<double>(mesh_resolution(config_.base, levels_.mesh_level)) / partition_.per_axis();
  if (std::pow(per_bin, config_.d) > kMaxMeshPoints) throw std::invalid_argument("SACB: mesh too fine");
  bins_.resize(partition_.bin_count());
  mesh_.resize(partition_.bin_count());
}

std::int64_t SacbPolicy::round_target(int round) const {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(std::pow(config_.base, round))));
}

double SacbPolicy::threshold(int round) const { return threshold_scale_ / std::pow(config_.base, 0.5 * round); }

Arm SacbPolicy::choose(std::span<const double> x) {
  if (delegate_) return delegate_->choose(x);
  const BinState& b = bins_[partition_.locate_index(x)];
  return b.counts[0] > b.counts[1] ? Arm::two : Arm::one;
}

double SacbPolicy::statistic(std::size_t bin) const {
  const BinState& b = bins_[bin];
  const std::vector<Point>& mesh = *mesh_[bin];
  const double coarse = std::pow(config_.base, -levels_.coarse_level);
  const double fine = std::pow(config_.base, -levels_.fine_level);
  double sup = 0.0;
  for (int k = 0; k < 2; ++k) {
    const LocalFitter fitter(config_.d, b.xs[k], b.ys[k]);
    for (const Point& p : mesh) {
      const double gap = std::abs(fitter.value(p, coarse, degree_) - fitter.value(p, fine, degree_));
      sup = std::max(sup, gap);
    }
  }
  return sup;
}

void SacbPolicy::finish_round(std::size_t bin) {
  BinState& b = bins_[bin];
  if (!b.fired) {
    if (!mesh_[bin]) mesh_[bin] = mesh_points(partition_.bin_at(bin), partition_, levels_.mesh_level);
    RoundRecord rec{bin, b.round, statistic(bin), threshold(b.round), false};
    rec.fired = rec.statistic >= rec.threshold;
    if (rec.fired) {
      b.fired = true;
      b.fired_round = b.round;
    }
    history_.push_back(rec);
  }
  ++b.round;
  b.counts = {0, 0};
  for (int k = 0; k < 2; ++k) {
    b.xs[k].clear();
    b.ys[k].clear();
  }
  if (!b.done && (b.fired || b.round > levels_.max_round)) {
    b.done = true;
    ++done_bins_;
  }
}

void SacbPolicy::hand_off() {
  int first = levels_.max_round;
  for (const BinState& b : bins_)
    if (b.fired) first = std::min(first, b.fired_round);
  const double loglog = log_base(std::log(config_.horizon), config_.base);
  raw_beta_hat_ = (first - config_.upsilon * loglog) / (2.0 * levels_.partition_level);
  beta_hat_ = std::clamp(*raw_beta_hat_, config_.beta_lo, config_.beta_hi);
  handoff_step_ = step_;
  const double horizon =
      config_.handoff == HandoffHorizon::full ? config_.horizon : config_.horizon - static_cast<double>(step_);
  delegate_ = config_.factory(std::min(1.0, *beta_hat_), std::max(horizon, 3.0));
  for (BinState& b : bins_) {
    for (int k = 0; k < 2; ++k) {
      b.xs[k].clear();
      b.xs[k].shrink_to_fit();
      b.ys[k].clear();
      b.ys[k].shrink_to_fit();
    }
  }
}

void SacbPolicy::update(std::span<const double> x, Arm arm, double reward) {
  ++step_;
  if (delegate_) {
    delegate_->update(x, arm, reward);
    return;
  }
  const std::size_t bin = partition_.locate_index(x);
  BinState& b = bins_[bin];
  const int k = index_of(arm);
  if ((b.counts[0] > b.counts[1]) != (arm == Arm::two))
    throw Error(ErrorKind::state_desync, "arm does not follow the alternation");
  ++b.counts[k];
  if (b.round <= levels_.max_round) {
    b.xs[k].insert(b.xs[k].end(), x.begin(), x.end());
    b.ys[k].push_back(reward);
  }
  if (b.counts[0] + b.counts[1] >= 2 * round_target(b.round)) {
    if (b.round <= levels_.max_round) {
      finish_round(bin);
    } else {
      ++b.round;
      b.counts = {0, 0};
    }
  }
  if (done_bins_ == bins_.size()) hand_off();
}

}  // namespace sacb
