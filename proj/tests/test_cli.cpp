#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sacb/config.hpp"
#include "sacb/error.hpp"
#include "sacb/report.hpp"
#include "sacb/runner.hpp"

using namespace sacb;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorKind::validation_error;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sacblab_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmall = R"({
  "instance": "setting2", "beta": 0.5,
  "policies": [{"kind": "abse", "beta": "true"}, {"kind": "abse", "beta": 0.75}, "sacb"],
  "T": 5000, "reps": 3, "base_seed": 9, "checkpoint_stride": 500,
  "sweep": {"beta": [0.45, 0.5]}
})";

int run_tool(const std::string& args) {
  const int status = std::system((std::string(SACBLAB_EXE) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, MinimalDefaults) {
  const auto cfg = parse_config(R"({"instance": "setting1", "beta": 0.9, "T": 2000000, "policies": ["sacb"]})");
  EXPECT_EQ(cfg.instance.kind, "setting1");
  EXPECT_EQ(cfg.instance.beta, 0.9);
  EXPECT_EQ(cfg.horizon, 2000000);
  EXPECT_EQ(cfg.reps, 40);
  ASSERT_EQ(cfg.policies.size(), 1u);
  const auto& p = cfg.policies[0];
  EXPECT_EQ(p.kind, "sacb");
  EXPECT_EQ(p.gamma_sacb, 0.145);
  EXPECT_EQ(p.q, 1.1);
  EXPECT_EQ(p.upsilon, 0.325);
  EXPECT_EQ(p.beta_lo, 0.4);
  EXPECT_EQ(p.beta_hi, 1.0);
  EXPECT_EQ(p.c0, 2.0);
  EXPECT_EQ(p.gamma_abse, 2.0);
}

TEST(Config, Rejections) {
  EXPECT_EQ(kind_of(R"({"policies": [{"kind": "sacb", "q": 0.9}]})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"policies": ["sacb"], "bogus": 1})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"policies": [{"kind": "abse", "beta": 1.5}]})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"policies": []})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"policies": ["sacb"], "T": 2.5})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"instance": "power", "policies": ["sacb"]})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"policies": [{"kind": "abse", "beta": "tilde"}]})"), ErrorKind::validation_error);
  EXPECT_EQ(kind_of(R"({"policies": ["sacb"],)"), ErrorKind::parse_error);
  EXPECT_EQ(kind_of("[1, 2]"), ErrorKind::parse_error);
}

TEST(Config, RoundTrip) {
  const auto a = parse_config(kSmall);
  const std::string text = serialize_config(a);
  const auto b = parse_config(text);
  EXPECT_EQ(serialize_config(b), text);
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);

  auto c = a;
  c.output_dir = "elsewhere";
  c.threads = 4;
  EXPECT_EQ(config_hash(c), config_hash(a));
  c.base_seed = 10;
  EXPECT_NE(config_hash(c), config_hash(a));
}

TEST(Config, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(SACBLAB_CONFIG_DIR)) {
    SCOPED_TRACE(entry.path().string());
    EXPECT_NO_THROW(load_config(entry.path().string()));
  }
}

TEST(Config, CellsAndPolicies) {
  auto cfg = parse_config(R"({"instance": "setting1", "beta": 0.9, "policies": ["sacb"]})");
  const auto one = expand_cells(cfg);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].beta, 0.9);
  EXPECT_EQ(one[0].horizon, 2000000);

  cfg = parse_config(R"({
    "instance": "setting2", "beta": 0.5,
    "policies": [{"kind": "abse", "beta": "true"}, {"kind": "abse", "beta": "tilde"}, "sacb"],
    "sweep": {"beta": [0.45, 0.5], "T": [1000, 2000, 4000], "tilde_beta": [0.4, 0.5, 0.6]}
  })");
  const auto cells = expand_cells(cfg);
  EXPECT_EQ(cells.size(), 6u);
  const auto pols = expand_policies(cfg, Cell{0.5, 1000});
  std::vector<std::string> labels;
  int references = 0;
  for (const auto& p : pols) {
    labels.push_back(p.label);
    references += p.reference;
  }
  EXPECT_EQ(labels, (std::vector<std::string>{"ABSE(0.5)", "ABSE(0.4)", "ABSE(0.6)", "SACB"}));
  EXPECT_EQ(references, 1);
  EXPECT_TRUE(pols[0].reference);
}

TEST(Report, Formatting) {
  EXPECT_EQ(format_significant(12345.678), "12345.7");
  EXPECT_EQ(format_significant(0.000123456789), "0.000123457");
  EXPECT_EQ(format_significant(0.0), "0");
  EXPECT_EQ(format_significant(-2.5), "-2.50000");
  EXPECT_EQ(format_significant(27153.0, 3), "27153");
  EXPECT_EQ(compact_number(0.5), "0.5");
  EXPECT_EQ(compact_number(2.0), "2");
  EXPECT_EQ(results_header(),
            "config_hash,instance,beta,tilde_beta,policy,T,reps,mean_regret,sd,ci95,mean_t_sacb,mean_beta_hat,"
            "relative_loss");
}

TEST(Report, RelativeLoss) {
  std::vector<ResultRow> rows(4);
  rows[0].beta = rows[1].beta = 0.5;
  rows[2].beta = rows[3].beta = 0.6;
  for (auto& r : rows) r.horizon = 100;
  rows[0].mean_regret = 200.0;
  rows[1].mean_regret = 250.0;
  rows[2].mean_regret = 100.0;
  rows[3].mean_regret = 90.0;
  fill_relative_loss(rows, {true, false, false, true});
  EXPECT_EQ(*rows[0].relative_loss, 0.0);
  EXPECT_DOUBLE_EQ(*rows[1].relative_loss, 0.25);
  EXPECT_DOUBLE_EQ(*rows[2].relative_loss, 10.0 / 90.0);
  EXPECT_EQ(*rows[3].relative_loss, 0.0);
}

TEST(Report, PlotDataNeedsAxis) {
  std::vector<ResultRow> rows(1);
  rows[0].beta = 0.5;
  rows[0].horizon = 100;
  rows[0].policy = "SACB";
  const fs::path dir = scratch("axis");
  for (const char* fig : {"regret_vs_T", "regret_vs_tilde_beta"}) {
    try {
      emit_plot_data(rows, fig, dir, "h");
      ADD_FAILURE() << fig;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::missing_axis);
    }
  }
  EXPECT_THROW(emit_plot_data(rows, "histogram", dir, "h"), Error);
  fs::remove_all(dir);
}

TEST(Runner, ResultsAreReproducible) {
  const auto cfg = parse_config(kSmall);
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const auto first = run_config(cfg, RunOptions{a});
  auto threaded = cfg;
  threaded.threads = 2;
  const auto second = run_config(threaded, RunOptions{b, true});
  EXPECT_EQ(first.hash, second.hash);
  const std::string text = slurp(a / "results.csv");
  EXPECT_EQ(text, slurp(b / "results.csv"));

  const auto lines = lines_of(text);
  ASSERT_EQ(lines.size(), 2u + 6u);
  EXPECT_EQ(lines[0], std::string("# sacblab ") + kToolVersion + " config " + first.hash);
  EXPECT_EQ(lines[1], results_header());

  const auto rows = read_results(a / "results.csv");
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.reps, 3);
    EXPECT_EQ(r.horizon, 5000);
    if (r.policy == "SACB") {
      EXPECT_TRUE(r.mean_beta_hat.has_value());
      EXPECT_TRUE(r.mean_t_sacb.has_value());
    }
    if (r.policy == "ABSE(" + compact_number(r.beta) + ")") EXPECT_EQ(*r.relative_loss, 0.0);
    ASSERT_TRUE(r.relative_loss.has_value());
  }

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["status"], "complete");
  EXPECT_EQ(manifest["config_hash"], first.hash);
  EXPECT_EQ(manifest["version"], kToolVersion);
  EXPECT_EQ(manifest["completed_cells"].size(), 2u);

  const auto table = lines_of(slurp(a / "tables" / "regret.csv"));
  ASSERT_EQ(table.size(), 1u + 1u + 2u);
  EXPECT_EQ(table[1], "beta,T,ABSE(0.45),ABSE(0.75),SACB,ABSE(0.5)");
  EXPECT_TRUE(fs::exists(a / "tables" / "relative_loss.csv"));
  EXPECT_TRUE(fs::exists(a / "tables" / "regret_scaled.csv"));
  EXPECT_FALSE(fs::exists(a / "traces"));
  EXPECT_EQ(std::distance(fs::directory_iterator(b / "traces"), fs::directory_iterator{}), 18);

  for (const auto& f : first.files) EXPECT_TRUE(fs::exists(f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Runner, ReplotAndReports) {
  auto cfg = parse_config(R"({
    "instance": "setting2", "beta": 0.5,
    "policies": [{"kind": "abse", "beta": "tilde"}, "sacb"],
    "T": 3000, "reps": 2, "sweep": {"tilde_beta": [0.5, 0.75]}
  })");
  const fs::path dir = scratch("replot");
  run_config(cfg, RunOptions{dir});
  const fs::path data = dir / "plotdata";
  ASSERT_TRUE(fs::exists(data));
  const auto files = replot(cfg, dir);
  ASSERT_FALSE(files.empty());
  for (const auto& f : files) EXPECT_TRUE(fs::exists(f));

  const auto lv = nlohmann::json::parse(levels_report(parse_config(
      R"({"instance": "setting1", "beta": 0.9, "T": 2000000, "policies": ["sacb", {"kind": "abse", "beta": 1.0}]})")));
  ASSERT_EQ(lv["levels"].size(), 2u);
  EXPECT_EQ(lv["levels"][0]["l"], 7);
  EXPECT_EQ(lv["levels"][0]["r_bar"], 24);
  EXPECT_EQ(lv["levels"][0]["bins_per_axis"], 2);
  EXPECT_EQ(lv["levels"][1]["abse"][0]["max_depth"], 6);

  const auto vr = nlohmann::json::parse(verify_report(parse_config(
      R"({"instance": "setting2", "beta": 0.5, "T": 2000000, "policies": ["sacb"]})")));
  EXPECT_TRUE(vr["cells"][0]["holder"]["holds"].get<bool>());
  EXPECT_TRUE(vr["cells"][0]["margin"]["holds"].get<bool>());
  fs::remove_all(dir);
}

TEST(Tool, ExitCodes) {
  const fs::path dir = scratch("tool");
  fs::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string good = write("good.json", R"({"instance": "setting2", "beta": 0.5, "T": 2000, "reps": 2,
                                                  "policies": ["sacb"]})");
  const std::string bad = write("bad.json", R"({"policies": [{"kind": "sacb", "q": 0.9}]})");
  const std::string broken = write("broken.json", "{");
  const std::string unplottable = write("unplottable.json", R"({"instance": "setting2", "beta": 0.5, "T": 2000,
                                            "reps": 2, "policies": ["sacb"], "figures": ["regret_vs_T"]})");
  const std::string out = (dir / "out").string();
  EXPECT_EQ(run_tool("run --config " + good + " --out " + out + " --seed 3 --reps 2"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "results.csv"));
  EXPECT_EQ(run_tool("plot --config " + good + " --out " + out), 0);
  EXPECT_EQ(run_tool("levels --config " + good), 0);
  EXPECT_EQ(run_tool("run --config " + bad), 2);
  EXPECT_EQ(run_tool("run --config " + broken), 2);
  EXPECT_EQ(run_tool("run --config " + (dir / "absent.json").string()), 2);
  EXPECT_EQ(run_tool("run --config " + good + " --reps 0"), 2);
  EXPECT_EQ(run_tool("frobnicate --config " + good), 2);
  EXPECT_EQ(run_tool("run --config " + unplottable + " --out " + out), 2);
  EXPECT_EQ(run_tool("--version"), 0);
  fs::remove_all(dir);
}
