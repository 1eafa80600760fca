#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sacb/instance.hpp"
#include "sacb/policy.hpp"

namespace sacb {

struct Checkpoint {
  std::int64_t t = 0;
  double regret = 0.0;
  std::int64_t inferior = 0;
};

struct EpisodeOptions {
  std::int64_t checkpoint_stride = 0;  // 0 means horizon / 100
  bool record_actions = false;
  bool stop_after_handoff = false;
  // Called after every update.
  std::function<void(std::int64_t t, std::span<const double> x, Arm arm, const Policy& policy)> observer;
};

struct RegretTrace {
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  double regret = 0.0;
  std::int64_t inferior = 0;
  std::vector<Checkpoint> checkpoints;
  std::optional<std::int64_t> estimation_end;
  std::optional<double> beta_hat;
  std::vector<std::uint8_t> actions;
};

RegretTrace run_episode(const ProblemInstance& inst, Policy& policy, std::int64_t horizon, std::uint64_t seed,
                        const EpisodeOptions& opts = {});

using PolicyMaker = std::function<std::unique_ptr<Policy>(const ProblemInstance& inst, double horizon)>;

struct PolicySpec {
  std::string label;
  PolicyMaker make;
};

struct ExperimentSpec {
  std::int64_t horizon = 0;
  int reps = 1;
  std::uint64_t base_seed = 1;
  int threads = 1;
  EpisodeOptions episode;
};

struct ExperimentResult {
  std::string label;
  std::vector<RegretTrace> traces;  // indexed by replication
};

// Every policy sees the same covariate and noise streams in replication r.
std::vector<ExperimentResult> run_experiment(const ProblemInstance& inst, std::span<const PolicySpec> policies,
                                             const ExperimentSpec& spec);

struct Summary {
  std::string label;
  int reps = 0;
  double mean_regret = 0.0;
  double sd = 0.0;
  std::optional<double> ci95;
  double mean_inferior = 0.0;
  std::optional<double> mean_estimation_end;
  std::optional<double> mean_beta_hat;
  std::map<double, int> beta_hat_histogram;
  std::vector<Checkpoint> mean_curve;
};

Summary summarize(const std::string& label, std::span<const RegretTrace> traces);

}  // namespace sacb
