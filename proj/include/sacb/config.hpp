#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sacb/generators.hpp"
#include "sacb/instance.hpp"
#include "sacb/sim.hpp"

namespace sacb {

struct InstanceConfig {
  std::string kind = "setting1";  // setting1 | setting2 | power | lower_bound
  double beta = 0.9;
  int d = 1;
  double tilt = 0.0;
  std::optional<std::string> noise;  // bernoulli | gaussian; default depends on kind
  std::optional<double> sigma;
  // bump family overrides
  std::optional<double> tau;
  std::optional<double> margin_alpha;
  std::optional<double> left_slope;
  std::optional<double> amplitude;
  std::optional<double> c0;
  std::optional<double> bump_scale;
  // power payoff
  double delta = 1.0;
  // lower-bound family
  double gamma = 0.9;
  std::string variant = "at_most_lipschitz";
  int member = 0;  // 0 = nominal, k = k-th alternative
};

enum class BetaChoice { fixed, instance, sweep };

struct PolicyConfig {
  std::string kind = "sacb";  // sacb | abse | oracle | fixed
  // abse
  BetaChoice beta_choice = BetaChoice::instance;
  double beta = 1.0;
  double c0 = 2.0;
  double gamma_abse = 2.0;
  std::string terminal = "commit";  // commit | continue
  // sacb
  double beta_lo = 0.4;
  double beta_hi = 1.0;
  double gamma_sacb = 0.145;
  double q = 1.1;
  std::optional<double> upsilon;
  std::string handoff = "full";  // full | remaining
  // fixed
  int arm = 1;
};

struct SweepConfig {
  std::vector<double> beta;
  std::vector<double> horizon;
  std::vector<double> tilde_beta;
};

struct ExperimentConfig {
  InstanceConfig instance;
  std::vector<PolicyConfig> policies;
  std::int64_t horizon = 2000000;
  int reps = 40;
  std::uint64_t base_seed = 1;
  std::int64_t checkpoint_stride = 0;
  SweepConfig sweep;
  std::vector<std::string> figures;
  std::string output_dir = "out";
  int threads = 1;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
// Canonical JSON text: every field explicit, keys sorted.
std::string serialize_config(const ExperimentConfig& cfg);
// Hash of the canonical text without run-only fields (output_dir, threads).
std::string config_hash(const ExperimentConfig& cfg);
std::string short_hash(std::string_view text);

// One (instance beta, horizon) cell of the sweep.
struct Cell {
  double beta = 0.0;
  std::int64_t horizon = 0;
};

std::vector<Cell> expand_cells(const ExperimentConfig& cfg);

struct ExpandedPolicy {
  std::string label;
  std::string kind;
  std::optional<double> tilde_beta;  // for ABSE
  bool reference = false;            // ABSE tuned to the instance smoothness
  PolicyMaker make;
};

ProblemInstance build_instance(const InstanceConfig& ic, double beta, double horizon);
std::vector<ExpandedPolicy> expand_policies(const ExperimentConfig& cfg, const Cell& cell);

}  // namespace sacb
