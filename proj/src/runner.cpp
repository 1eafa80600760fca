#include "sacb/runner.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include "json.hpp"
#include "sacb/abse.hpp"
#include "sacb/error.hpp"
#include "sacb/multi_index.hpp"
#include "sacb/partition.hpp"
#include "sacb/sacb.hpp"
#include "sacb/verify.hpp"

namespace sacb {

namespace fs = std::filesystem;
using nlohmann::json;

double table_scale(const std::string& instance_kind) {
  if (instance_kind == "setting1") return 1e4;
  if (instance_kind == "setting2") return 1e3;
  return 1.0;
}

namespace {

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::vector<std::string> figures_for(const ExperimentConfig& cfg) {
  if (!cfg.figures.empty()) return cfg.figures;
  std::vector<std::string> f;
  bool swept = false;
  for (const auto& p : cfg.policies) swept = swept || (p.kind == "abse" && p.beta_choice == BetaChoice::sweep);
  if (swept && cfg.sweep.tilde_beta.size() >= 2) f.push_back("regret_vs_tilde_beta");
  if (cfg.sweep.horizon.size() >= 2) f.push_back("regret_vs_T");
  return f;
}

std::string cell_stem(const Cell& c) {
  return "beta" + compact_number(c.beta) + "_T" + std::to_string(c.horizon);
}

void write_curve(const fs::path& file, const std::vector<RegretTrace>& traces, const std::string& hash) {
  PlotSeries s;
  const std::size_t points = traces.front().checkpoints.size();
  for (const auto& t : traces)
    if (t.checkpoints.size() != points) return;
  const double n = static_cast<double>(traces.size());
  for (std::size_t k = 0; k < points; ++k) {
    double sum = 0.0, sq = 0.0;
    for (const auto& t : traces) sum += t.checkpoints[k].regret;
    const double mean = sum / n;
    for (const auto& t : traces) sq += (t.checkpoints[k].regret - mean) * (t.checkpoints[k].regret - mean);
    const double ci = traces.size() >= 2 ? 1.96 * std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
    s.x.push_back(static_cast<double>(traces.front().checkpoints[k].t));
    s.mean.push_back(mean);
    s.ci_lo.push_back(mean - ci);
    s.ci_hi.push_back(mean + ci);
  }
  write_series_csv(file, s, hash);
}

std::string label_slug(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.') c = '_';
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

}  // namespace

RunOutcome run_config(const ExperimentConfig& cfg, const RunOptions& opts) {
  RunOutcome outcome;
  outcome.hash = config_hash(cfg);
  const fs::path out = opts.out_dir.empty() ? fs::path(cfg.output_dir) : opts.out_dir;
  fs::create_directories(out);

  json manifest;
  manifest["tool"] = "sacblab";
  manifest["version"] = kToolVersion;
  manifest["config_hash"] = outcome.hash;
  manifest["config"] = json::parse(serialize_config(cfg));
  manifest["random_streams"] = "counter-based, shared by all policies within a replication";
  manifest["log_convention"] = "natural logarithm inside log log T";
  manifest["completed_cells"] = json::array();
  manifest["status"] = "running";
  auto save_manifest = [&] { write_text(out / "manifest.json", manifest.dump(2) + "\n"); };
  save_manifest();

  std::vector<bool> reference;
  try {
    for (const Cell& cell : expand_cells(cfg)) {
      const ProblemInstance inst = build_instance(cfg.instance, cell.beta, static_cast<double>(cell.horizon));
      const auto policies = expand_policies(cfg, cell);
      std::vector<PolicySpec> specs;
      for (const auto& p : policies) specs.push_back({p.label, p.make});
      ExperimentSpec es;
      es.horizon = cell.horizon;
      es.reps = cfg.reps;
      es.base_seed = cfg.base_seed;
      es.threads = cfg.threads;
      es.episode.checkpoint_stride = cfg.checkpoint_stride;
      if (opts.log) *opts.log << "cell " << cell_stem(cell) << ": " << specs.size() << " policies x " << cfg.reps
                              << " reps" << std::endl;
      const auto results = run_experiment(inst, specs, es);
      for (std::size_t i = 0; i < results.size(); ++i) {
        const Summary s = summarize(results[i].label, results[i].traces);
        ResultRow row;
        row.config_hash = outcome.hash;
        row.instance = cfg.instance.kind;
        row.beta = cell.beta;
        row.tilde_beta = policies[i].tilde_beta;
        row.policy = policies[i].label;
        row.horizon = cell.horizon;
        row.reps = s.reps;
        row.mean_regret = s.mean_regret;
        row.sd = s.sd;
        row.ci95 = s.ci95;
        row.mean_t_sacb = s.mean_estimation_end;
        row.mean_beta_hat = s.mean_beta_hat;
        outcome.rows.push_back(row);
        reference.push_back(policies[i].reference);
        if (opts.log) *opts.log << "  " << row.policy << ": mean regret " << format_significant(s.mean_regret) << std::endl;

        const std::string stem = cell_stem(cell) + "_" + label_slug(policies[i].label);
        const fs::path curve = out / "plotdata" / ("regret_curve_" + stem + ".csv");
        write_curve(curve, results[i].traces, outcome.hash);
        outcome.files.push_back(curve);
        if (opts.traces) {
          for (std::size_t r = 0; r < results[i].traces.size(); ++r) {
            const auto& tr = results[i].traces[r];
            const std::string id = short_hash(outcome.hash + "/" + stem + "/" + std::to_string(r));
            const fs::path p = out / "traces" / (id + ".csv");
            std::string text = std::string("# sacblab ") + kToolVersion + " config " + outcome.hash + " " + stem +
                               " rep " + std::to_string(r) + "\n" + "t,regret,inferior\n";
            for (const auto& c : tr.checkpoints)
              text += std::to_string(c.t) + "," + format_significant(c.regret) + "," + std::to_string(c.inferior) + "\n";
            write_text(p, text);
            outcome.files.push_back(p);
          }
        }
      }
      manifest["completed_cells"].push_back({{"beta", cell.beta}, {"T", cell.horizon}});
      save_manifest();
    }
    fill_relative_loss(outcome.rows, reference);
    write_results(out / "results.csv", outcome.rows, outcome.hash);
    outcome.files.push_back(out / "results.csv");
    write_tables(outcome.rows, out, table_scale(cfg.instance.kind), outcome.hash);
    for (const auto& fig : figures_for(cfg)) {
      auto files = emit_plot_data(outcome.rows, fig, out, outcome.hash);
      outcome.files.insert(outcome.files.end(), files.begin(), files.end());
    }
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    save_manifest();
    throw;
  }
  manifest["status"] = "complete";
  save_manifest();
  return outcome;
}

std::vector<fs::path> replot(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const auto rows = read_results(out_dir / "results.csv");
  if (rows.empty()) throw Error(ErrorKind::parse_error, "results.csv holds no rows");
  const std::string hash = rows.front().config_hash;
  write_tables(rows, out_dir, table_scale(cfg.instance.kind), hash);
  std::vector<fs::path> files;
  for (const auto& fig : figures_for(cfg)) {
    auto f = emit_plot_data(rows, fig, out_dir, hash);
    files.insert(files.end(), f.begin(), f.end());
  }
  return files;
}

namespace {

json report_json(const PropertyReport& r) {
  return {{"holds", r.holds},
          {"margin_of_violation", r.margin_of_violation},
          {"witness", r.witness},
          {"witness_other", r.witness_other},
          {"detail", r.detail}};
}

}  // namespace

std::string verify_report(const ExperimentConfig& cfg) {
  json out;
  out["config_hash"] = config_hash(cfg);
  out["version"] = kToolVersion;
  for (const Cell& cell : expand_cells(cfg)) {
    const ProblemInstance inst = build_instance(cfg.instance, cell.beta, static_cast<double>(cell.horizon));
    json c;
    c["beta"] = cell.beta;
    c["T"] = cell.horizon;
    c["instance"] = inst.meta.name;
    c["params"] = inst.meta.params;
    const int grid = inst.d == 1 ? 4001 : 41;
    if (inst.meta.beta && inst.meta.lipschitz) {
      c["holder"] = report_json(check_holder(inst, *inst.meta.beta, *inst.meta.lipschitz, grid));
      c["holder"]["beta"] = *inst.meta.beta;
      c["holder"]["L"] = *inst.meta.lipschitz;
    }
    if (inst.meta.margin_alpha && inst.meta.margin_constant) {
      std::vector<double> deltas;
      for (int k = 1; k <= 100; ++k) deltas.push_back(k / 100.0);
      c["margin"] = report_json(check_margin(inst, *inst.meta.margin_alpha, *inst.meta.margin_constant,
                                             inst.d == 1 ? 200000 : 400, deltas));
      c["margin"]["alpha"] = *inst.meta.margin_alpha;
      c["margin"]["C0"] = *inst.meta.margin_constant;
    }
    if (inst.meta.beta && inst.meta.bias_constant && inst.meta.bias_level) {
      double q = 2.0;
      for (const auto& p : cfg.policies)
        if (p.kind == "sacb") q = p.q;
      c["self_similarity"] = report_json(check_self_similarity(inst, *inst.meta.beta, *inst.meta.bias_constant,
                                                               *inst.meta.bias_level, 6, q,
                                                               holder_floor(*inst.meta.beta)));
      c["self_similarity"]["q"] = q;
    }
    out["cells"].push_back(c);
  }
  return out.dump(2);
}

std::string levels_report(const ExperimentConfig& cfg) {
  json out;
  out["config_hash"] = config_hash(cfg);
  out["version"] = kToolVersion;
  std::set<std::int64_t> horizons;
  for (const Cell& c : expand_cells(cfg)) horizons.insert(c.horizon);
  for (std::int64_t horizon : horizons) {
    for (const auto& p : cfg.policies) {
      json e;
      e["T"] = horizon;
      e["policy"] = p.kind;
      if (p.kind == "sacb") {
        const double ups = p.upsilon.value_or(0.325);
        const SacbLevels lv = sacb_levels(static_cast<double>(horizon), cfg.instance.d, p.q, p.beta_lo, p.beta_hi, ups);
        const Partition part(cfg.instance.d, p.q, lv.partition_level);
        const double scale = p.gamma_sacb * std::pow(std::log(static_cast<double>(horizon)),
                                                     cfg.instance.d / (2.0 * p.beta_lo) + 0.5);
        e["l"] = lv.partition_level;
        e["r_bar"] = lv.max_round;
        e["j1"] = lv.coarse_level;
        e["j2"] = lv.fine_level;
        e["l_tilde"] = lv.mesh_level;
        e["bins_per_axis"] = part.per_axis();
        e["mesh_per_axis"] = mesh_resolution(p.q, lv.mesh_level);
        e["mesh_points_first_bin"] = mesh_points(part.bin_at(0), part, lv.mesh_level).size();
        e["bandwidth_coarse"] = std::pow(p.q, -lv.coarse_level);
        e["bandwidth_fine"] = std::pow(p.q, -lv.fine_level);
        e["threshold_round_1"] = scale / std::pow(p.q, 0.5);
        e["threshold_round_r_bar"] = scale / std::pow(p.q, 0.5 * lv.max_round);
        e["log_q_log_T"] = log_base(std::log(static_cast<double>(horizon)), p.q);
      } else if (p.kind == "abse") {
        std::vector<double> betas;
        if (p.beta_choice == BetaChoice::fixed) betas = {p.beta};
        else if (p.beta_choice == BetaChoice::sweep) betas = cfg.sweep.tilde_beta;
        else betas = {std::min(1.0, cfg.instance.beta)};
        for (double b : betas) {
          AbseConfig ac;
          ac.beta = b;
          ac.c0 = p.c0;
          ac.confidence_scale = p.gamma_abse;
          ac.horizon = static_cast<double>(horizon);
          ac.d = cfg.instance.d;
          const AbsePolicy a(ac);
          json lifetimes = json::array();
          for (int k = 0; k <= a.max_depth(); ++k) lifetimes.push_back(a.lifetime(k));
          e["abse"].push_back({{"beta", b}, {"max_depth", a.max_depth()}, {"lifetimes", lifetimes}});
        }
      } else {
        continue;
      }
      out["levels"].push_back(e);
    }
  }
  return out.dump(2);
}

}  // namespace sacb
