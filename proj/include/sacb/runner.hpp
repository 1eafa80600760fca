#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sacb/config.hpp"
#include "sacb/report.hpp"

namespace sacb {

struct RunOptions {
  std::filesystem::path out_dir;
  bool traces = false;
  std::ostream* log = nullptr;
};

struct RunOutcome {
  std::string hash;
  std::vector<ResultRow> rows;
  std::vector<std::filesystem::path> files;
};

// Runs every cell of the sweep and writes results.csv, manifest.json,
// tables/, plotdata/ and figures/ (and traces/ on request) under out_dir.
RunOutcome run_config(const ExperimentConfig& cfg, const RunOptions& opts);

// Regenerates plot data and tables from an existing results.csv.
std::vector<std::filesystem::path> replot(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Property checks of the configured instance, as JSON text.
std::string verify_report(const ExperimentConfig& cfg);

// Level schedule of the configured adaptive policies, as JSON text.
std::string levels_report(const ExperimentConfig& cfg);

double table_scale(const std::string& instance_kind);

}  // namespace sacb
