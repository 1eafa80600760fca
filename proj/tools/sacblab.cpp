// Command-line driver: run experiments, check instances, print level schedules, re-plot.
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "sacb/config.hpp"
#include "sacb/error.hpp"
#include "sacb/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation harness for smoothness-adaptive contextual bandits"};
  app.set_version_flag("--version", std::string(sacb::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> threads;
  bool traces = false;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "base seed override");
  app.add_option("--reps", reps, "replication count override");
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--traces", traces, "write per-replication regret traces");

  auto* run = app.add_subcommand("run", "run every cell of the sweep and write results");
  auto* verify = app.add_subcommand("verify", "check smoothness, margin and self-similarity of the instance");
  auto* levels = app.add_subcommand("levels", "print the level schedule of the configured policies");
  auto* plot = app.add_subcommand("plot", "rebuild plot data and tables from results.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  sacb::ExperimentConfig cfg;
  try {
    cfg = sacb::load_config(config_path);
    if (seed) cfg.base_seed = *seed;
    if (reps) {
      if (*reps < 1) throw sacb::Error(sacb::ErrorKind::validation_error, "reps must be >= 1");
      cfg.reps = *reps;
    }
    if (threads) {
      if (*threads < 1) throw sacb::Error(sacb::ErrorKind::validation_error, "threads must be >= 1");
      cfg.threads = *threads;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (run->parsed()) {
      sacb::RunOptions opts{cfg.output_dir, traces, &std::cerr};
      const auto outcome = sacb::run_config(cfg, opts);
      std::cout << "config " << outcome.hash << ": " << outcome.rows.size() << " rows written to "
                << std::filesystem::path(cfg.output_dir) / "results.csv" << "\n";
    } else if (verify->parsed()) {
      std::cout << sacb::verify_report(cfg) << "\n";
    } else if (levels->parsed()) {
      std::cout << sacb::levels_report(cfg) << "\n";
    } else if (plot->parsed()) {
      for (const auto& f : sacb::replot(cfg, cfg.output_dir)) std::cout << f.string() << "\n";
    }
  } catch (const sacb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool config_kind = e.kind() == sacb::ErrorKind::validation_error || e.kind() == sacb::ErrorKind::parse_error ||
                             e.kind() == sacb::ErrorKind::missing_axis;
    return config_kind ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
