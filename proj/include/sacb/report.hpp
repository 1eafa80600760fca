#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sacb {

inline constexpr const char* kToolVersion = SACBLAB_VERSION;

struct ResultRow {
  std::string config_hash;
  std::string instance;
  double beta = 0.0;
  std::optional<double> tilde_beta;
  std::string policy;
  std::int64_t horizon = 0;
  int reps = 0;
  double mean_regret = 0.0;
  double sd = 0.0;
  std::optional<double> ci95;
  std::optional<double> mean_t_sacb;
  std::optional<double> mean_beta_hat;
  std::optional<double> relative_loss;
};

// Fixed-point text with `digits` significant digits, independent of locale.
std::string format_significant(double v, int digits = 6);
// Same, without trailing zeros.
std::string compact_number(double v);

std::string results_header();
std::string format_row(const ResultRow& r);
void write_results(const std::filesystem::path& file, const std::vector<ResultRow>& rows, const std::string& hash);
std::vector<ResultRow> read_results(const std::filesystem::path& file);

// (R - R_ref) / R_ref for every row of the same (beta, T) cell.
void fill_relative_loss(std::vector<ResultRow>& rows, const std::vector<bool>& is_reference);

struct PlotSeries {
  std::string label;
  std::vector<double> x, mean, ci_lo, ci_hi;
};

// Figure kinds: regret_vs_tilde_beta, regret_vs_T. Returns the written files.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<ResultRow>& rows, const std::string& figure,
                                                  const std::filesystem::path& out_dir, const std::string& hash);
void write_series_csv(const std::filesystem::path& file, const PlotSeries& s, const std::string& hash);
void write_svg(const std::filesystem::path& file, const std::string& title, const std::string& x_label,
               const std::vector<PlotSeries>& series, const std::string& hash);

// Regret and relative-loss matrices: rows are beta values, columns policies.
// Regret is also written divided by `scale`.
void write_tables(const std::vector<ResultRow>& rows, const std::filesystem::path& out_dir, double scale,
                  const std::string& hash);

}  // namespace sacb
