#include "sacb/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sacb/abse.hpp"
#include "sacb/baselines.hpp"
#include "sacb/error.hpp"
#include "sacb/sacb.hpp"

namespace sacb {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::validation_error, what); }

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) invalid("unknown key '" + key + "' in " + where);
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    invalid(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> get_opt(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get<T>(obj, key, T{});
}

bool is_bump_kind(const std::string& kind) { return kind == "setting1" || kind == "setting2"; }

InstanceConfig parse_instance(const json& j, double top_beta) {
  InstanceConfig ic;
  if (j.is_string()) {
    ic.kind = j.get<std::string>();
    ic.beta = top_beta;
    return ic;
  }
  if (!j.is_object()) invalid("instance must be a string or an object");
  reject_unknown(j,
                 {"kind", "beta", "d", "tilt", "noise", "sigma", "tau", "margin_alpha", "left_slope", "amplitude",
                  "c0", "bump_scale", "delta", "gamma", "variant", "member"},
                 "instance");
  ic.kind = get<std::string>(j, "kind", ic.kind);
  ic.beta = get<double>(j, "beta", top_beta);
  ic.d = get<int>(j, "d", ic.d);
  ic.tilt = get<double>(j, "tilt", ic.tilt);
  ic.noise = get_opt<std::string>(j, "noise");
  ic.sigma = get_opt<double>(j, "sigma");
  ic.tau = get_opt<double>(j, "tau");
  ic.margin_alpha = get_opt<double>(j, "margin_alpha");
  ic.left_slope = get_opt<double>(j, "left_slope");
  ic.amplitude = get_opt<double>(j, "amplitude");
  ic.c0 = get_opt<double>(j, "c0");
  ic.bump_scale = get_opt<double>(j, "bump_scale");
  ic.delta = get<double>(j, "delta", ic.delta);
  ic.gamma = get<double>(j, "gamma", ic.gamma);
  ic.variant = get<std::string>(j, "variant", ic.variant);
  ic.member = get<int>(j, "member", ic.member);
  return ic;
}

PolicyConfig parse_policy(const json& j) {
  PolicyConfig pc;
  if (j.is_string()) {
    pc.kind = j.get<std::string>();
    return pc;
  }
  if (!j.is_object()) invalid("policy must be a string or an object");
  reject_unknown(j,
                 {"kind", "beta", "c0", "gamma_abse", "terminal", "beta_lo", "beta_hi", "gamma_sacb", "q", "upsilon",
                  "handoff", "arm"},
                 "policy");
  pc.kind = get<std::string>(j, "kind", pc.kind);
  if (j.contains("beta")) {
    const json& b = j.at("beta");
    if (b.is_number()) {
      pc.beta_choice = BetaChoice::fixed;
      pc.beta = b.get<double>();
    } else if (b == "true") {
      pc.beta_choice = BetaChoice::instance;
    } else if (b == "tilde") {
      pc.beta_choice = BetaChoice::sweep;
    } else {
      invalid("policy beta must be a number, \"true\" or \"tilde\"");
    }
  }
  pc.c0 = get<double>(j, "c0", pc.c0);
  pc.gamma_abse = get<double>(j, "gamma_abse", pc.gamma_abse);
  pc.terminal = get<std::string>(j, "terminal", pc.terminal);
  pc.beta_lo = get<double>(j, "beta_lo", pc.beta_lo);
  pc.beta_hi = get<double>(j, "beta_hi", pc.beta_hi);
  pc.gamma_sacb = get<double>(j, "gamma_sacb", pc.gamma_sacb);
  pc.q = get<double>(j, "q", pc.q);
  pc.upsilon = get_opt<double>(j, "upsilon");
  pc.handoff = get<std::string>(j, "handoff", pc.handoff);
  pc.arm = get<int>(j, "arm", pc.arm);
  return pc;
}

std::vector<double> number_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) invalid(std::string("sweep.") + key + " must be a number or a list");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) invalid(std::string("sweep.") + key + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void validate(ExperimentConfig& cfg) {
  const auto& ic = cfg.instance;
  static const std::set<std::string> kinds{"setting1", "setting2", "power", "lower_bound"};
  if (!kinds.count(ic.kind)) invalid("unknown instance kind '" + ic.kind + "'");
  if (ic.d < 1) invalid("instance.d must be >= 1");
  if (ic.kind != "lower_bound" && ic.d != 1) invalid("only the lower_bound family supports d > 1");
  if (ic.noise && *ic.noise != "bernoulli" && *ic.noise != "gaussian") invalid("noise must be bernoulli or gaussian");
  if (ic.variant != "at_most_lipschitz" && ic.variant != "at_least_lipschitz") invalid("unknown lower_bound variant");
  if (cfg.horizon < 3) invalid("T must be >= 3");
  if (cfg.reps < 1) invalid("reps must be >= 1");
  if (cfg.threads < 1) invalid("threads must be >= 1");
  if (cfg.checkpoint_stride < 0) invalid("checkpoint_stride must be >= 0");
  if (cfg.policies.empty()) invalid("at least one policy is required");
  for (double b : cfg.sweep.beta)
    if (!(b > 0.0 && b <= 1.0)) invalid("swept beta must lie in (0,1]");
  for (double t : cfg.sweep.horizon)
    if (!(t >= 3.0) || t != std::floor(t)) invalid("swept T must be an integer >= 3");
  for (double b : cfg.sweep.tilde_beta)
    if (!(b > 0.0 && b <= 1.0)) invalid("tilde_beta values must lie in (0,1]");
  if (!(ic.beta > 0.0)) invalid("instance beta must be positive");
  for (auto& pc : cfg.policies) {
    static const std::set<std::string> pk{"sacb", "abse", "oracle", "fixed"};
    if (!pk.count(pc.kind)) invalid("unknown policy kind '" + pc.kind + "'");
    if (pc.kind == "abse") {
      if (pc.beta_choice == BetaChoice::fixed && !(pc.beta > 0.0 && pc.beta <= 1.0)) invalid("abse beta must lie in (0,1]");
      if (pc.beta_choice == BetaChoice::sweep && cfg.sweep.tilde_beta.empty())
        invalid("abse beta \"tilde\" needs sweep.tilde_beta");
      if (!(pc.c0 > 0.0) || !(pc.gamma_abse > 0.0)) invalid("abse c0 and gamma_abse must be positive");
      if (pc.terminal != "commit" && pc.terminal != "continue") invalid("terminal must be commit or continue");
    }
    if (pc.kind == "sacb") {
      if (!(pc.q > 1.0)) invalid("sacb q must exceed 1");
      if (!(pc.beta_lo > 0.0 && pc.beta_lo <= pc.beta_hi)) invalid("sacb needs 0 < beta_lo <= beta_hi");
      if (pc.gamma_sacb < 0.0) invalid("gamma_sacb must be non-negative");
      if (pc.handoff != "full" && pc.handoff != "remaining") invalid("handoff must be full or remaining");
      if (!pc.upsilon) {
        if (is_bump_kind(ic.kind)) pc.upsilon = 0.325;
        else invalid("sacb upsilon is required for this instance kind");
      }
      if (!(*pc.upsilon >= 0.0)) invalid("upsilon must be non-negative");
      if (!(pc.c0 > 0.0) || !(pc.gamma_abse > 0.0)) invalid("c0 and gamma_abse must be positive");
      if (pc.terminal != "commit" && pc.terminal != "continue") invalid("terminal must be commit or continue");
    }
    if (pc.kind == "fixed" && pc.arm != 1 && pc.arm != 2) invalid("fixed arm must be 1 or 2");
  }
}

json instance_json(const InstanceConfig& ic) {
  json j;
  j["kind"] = ic.kind;
  j["beta"] = ic.beta;
  j["d"] = ic.d;
  j["tilt"] = ic.tilt;
  auto opt = [&](const char* k, const auto& v) {
    if (v) j[k] = *v;
    else j[k] = nullptr;
  };
  opt("noise", ic.noise);
  opt("sigma", ic.sigma);
  opt("tau", ic.tau);
  opt("margin_alpha", ic.margin_alpha);
  opt("left_slope", ic.left_slope);
  opt("amplitude", ic.amplitude);
  opt("c0", ic.c0);
  opt("bump_scale", ic.bump_scale);
  j["delta"] = ic.delta;
  j["gamma"] = ic.gamma;
  j["variant"] = ic.variant;
  j["member"] = ic.member;
  return j;
}

json policy_json(const PolicyConfig& pc) {
  json j;
  j["kind"] = pc.kind;
  switch (pc.beta_choice) {
    case BetaChoice::fixed: j["beta"] = pc.beta; break;
    case BetaChoice::instance: j["beta"] = "true"; break;
    case BetaChoice::sweep: j["beta"] = "tilde"; break;
  }
  j["c0"] = pc.c0;
  j["gamma_abse"] = pc.gamma_abse;
  j["terminal"] = pc.terminal;
  j["beta_lo"] = pc.beta_lo;
  j["beta_hi"] = pc.beta_hi;
  j["gamma_sacb"] = pc.gamma_sacb;
  j["q"] = pc.q;
  if (pc.upsilon) j["upsilon"] = *pc.upsilon;
  else j["upsilon"] = nullptr;
  j["handoff"] = pc.handoff;
  j["arm"] = pc.arm;
  return j;
}

json config_json(const ExperimentConfig& cfg, bool with_run_fields) {
  json j;
  j["instance"] = instance_json(cfg.instance);
  j["policies"] = json::array();
  for (const auto& p : cfg.policies) j["policies"].push_back(policy_json(p));
  j["T"] = cfg.horizon;
  j["reps"] = cfg.reps;
  j["base_seed"] = cfg.base_seed;
  j["checkpoint_stride"] = cfg.checkpoint_stride;
  j["sweep"] = {{"beta", cfg.sweep.beta}, {"T", cfg.sweep.horizon}, {"tilde_beta", cfg.sweep.tilde_beta}};
  j["figures"] = cfg.figures;
  if (with_run_fields) {
    j["output_dir"] = cfg.output_dir;
    j["threads"] = cfg.threads;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::parse_error, "top level must be an object");
  reject_unknown(j,
                 {"instance", "beta", "policies", "T", "reps", "base_seed", "checkpoint_stride", "sweep", "figures",
                  "output_dir", "threads"},
                 "config");
  ExperimentConfig cfg;
  const double top_beta = get<double>(j, "beta", cfg.instance.beta);
  if (j.contains("instance")) cfg.instance = parse_instance(j.at("instance"), top_beta);
  else cfg.instance.beta = top_beta;
  if (j.contains("policies")) {
    const json& ps = j.at("policies");
    if (ps.is_string()) cfg.policies.push_back(parse_policy(ps));
    else if (ps.is_array())
      for (const auto& p : ps) cfg.policies.push_back(parse_policy(p));
    else invalid("policies must be a list");
  }
  const double horizon = get<double>(j, "T", static_cast<double>(cfg.horizon));
  if (horizon != std::floor(horizon)) invalid("T must be an integer");
  cfg.horizon = static_cast<std::int64_t>(horizon);
  cfg.reps = get<int>(j, "reps", cfg.reps);
  cfg.base_seed = get<std::uint64_t>(j, "base_seed", cfg.base_seed);
  cfg.checkpoint_stride = get<std::int64_t>(j, "checkpoint_stride", cfg.checkpoint_stride);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.is_object()) invalid("sweep must be an object");
    reject_unknown(s, {"beta", "T", "tilde_beta"}, "sweep");
    cfg.sweep.beta = number_list(s, "beta");
    cfg.sweep.horizon = number_list(s, "T");
    cfg.sweep.tilde_beta = number_list(s, "tilde_beta");
  }
  cfg.figures = get<std::vector<std::string>>(j, "figures", cfg.figures);
  cfg.output_dir = get<std::string>(j, "output_dir", cfg.output_dir);
  cfg.threads = get<int>(j, "threads", cfg.threads);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) { return config_json(cfg, true).dump(2); }

std::string short_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const ExperimentConfig& cfg) { return short_hash(config_json(cfg, false).dump()); }

std::vector<Cell> expand_cells(const ExperimentConfig& cfg) {
  const std::vector<double> betas = cfg.sweep.beta.empty() ? std::vector<double>{cfg.instance.beta} : cfg.sweep.beta;
  const std::vector<double> horizons =
      cfg.sweep.horizon.empty() ? std::vector<double>{static_cast<double>(cfg.horizon)} : cfg.sweep.horizon;
  std::vector<Cell> cells;
  for (double b : betas)
    for (double t : horizons) cells.push_back({b, static_cast<std::int64_t>(t)});
  return cells;
}

ProblemInstance build_instance(const InstanceConfig& ic, double beta, double horizon) {
  std::optional<NoiseModel> noise;
  if (ic.noise) {
    noise = NoiseModel{*ic.noise == "gaussian" ? NoiseKind::gaussian : NoiseKind::bernoulli, ic.sigma.value_or(0.05)};
  }
  ProblemInstance inst;
  if (is_bump_kind(ic.kind)) {
    BumpShape s = ic.kind == "setting1" ? setting_one_shape() : setting_two_shape();
    if (ic.tau) s.tau = *ic.tau;
    if (ic.margin_alpha) s.alpha = *ic.margin_alpha;
    if (ic.left_slope) s.left_slope = *ic.left_slope;
    if (ic.amplitude) s.amplitude = *ic.amplitude;
    if (ic.c0) s.c0 = *ic.c0;
    if (ic.sigma) s.sigma = *ic.sigma;
    s.bump_scale = ic.bump_scale;
    inst = ic.kind == "setting1" ? make_setting_one(beta, horizon, s) : make_setting_two(beta, horizon, s);
  } else if (ic.kind == "power") {
    inst = make_power_payoff(beta, ic.delta, noise.value_or(NoiseModel{}));
  } else {
    LowerBoundSpec spec;
    spec.beta = beta;
    spec.gamma = ic.gamma;
    spec.alpha = ic.margin_alpha.value_or(1.0);
    spec.delta = ic.delta;
    spec.d = ic.d;
    spec.variant = ic.variant == "at_least_lipschitz" ? LowerBoundVariant::at_least_lipschitz
                                                      : LowerBoundVariant::at_most_lipschitz;
    auto family = make_lower_bound_family(spec, noise.value_or(NoiseModel{}));
    if (ic.member < 0 || ic.member >= static_cast<int>(family.size()))
      invalid("lower_bound member index out of range");
    inst = std::move(family[static_cast<std::size_t>(ic.member)]);
  }
  if (noise) inst.noise = *noise;
  if (ic.tilt != 0.0) inst.covariates = CovariateSampler(inst.d, ic.tilt);
  return inst;
}

namespace {

std::string abse_label(double beta) {
  std::ostringstream os;
  os << "ABSE(" << beta << ")";
  return os.str();
}

TerminalRule terminal_rule(const std::string& s) {
  return s == "continue" ? TerminalRule::keep_eliminating : TerminalRule::commit_to_leader;
}

}  // namespace

std::vector<ExpandedPolicy> expand_policies(const ExperimentConfig& cfg, const Cell& cell) {
  std::vector<ExpandedPolicy> out;
  const int d = cfg.instance.d;
  for (const auto& pc : cfg.policies) {
    if (pc.kind == "abse") {
      std::vector<std::pair<double, bool>> betas;  // (beta, reference)
      if (pc.beta_choice == BetaChoice::fixed) betas.emplace_back(pc.beta, std::abs(pc.beta - cell.beta) < 1e-12);
      else if (pc.beta_choice == BetaChoice::instance) betas.emplace_back(std::min(1.0, cell.beta), true);
      else
        for (double b : cfg.sweep.tilde_beta) betas.emplace_back(b, false);
      for (auto [b, ref] : betas) {
        const PolicyFactory factory = abse_factory(pc.c0, pc.gamma_abse, d, terminal_rule(pc.terminal));
        ExpandedPolicy ep{abse_label(b), "abse", b, ref,
                          [factory, b](const ProblemInstance&, double h) { return factory(b, h); }};
        out.push_back(std::move(ep));
      }
    } else if (pc.kind == "sacb") {
      SacbConfig sc;
      sc.beta_lo = pc.beta_lo;
      sc.beta_hi = pc.beta_hi;
      sc.gamma = pc.gamma_sacb;
      sc.base = pc.q;
      sc.upsilon = pc.upsilon.value_or(0.325);
      sc.d = d;
      sc.handoff = pc.handoff == "remaining" ? HandoffHorizon::remaining : HandoffHorizon::full;
      sc.factory = abse_factory(pc.c0, pc.gamma_abse, d, terminal_rule(pc.terminal));
      out.push_back({"SACB", "sacb", std::nullopt, false, [sc](const ProblemInstance&, double h) {
                       SacbConfig c = sc;
                       c.horizon = h;
                       return std::make_unique<SacbPolicy>(c);
                     }});
    } else if (pc.kind == "oracle") {
      out.push_back({"Oracle", "oracle", std::nullopt, false,
                     [](const ProblemInstance& inst, double) { return std::make_unique<OraclePolicy>(inst); }});
    } else {
      const Arm arm = pc.arm == 2 ? Arm::two : Arm::one;
      out.push_back({pc.arm == 2 ? "Fixed(2)" : "Fixed(1)", "fixed", std::nullopt, false,
                     [arm](const ProblemInstance&, double) { return std::make_unique<FixedArmPolicy>(arm); }});
    }
  }
  // de-duplicate labels (e.g. ABSE(beta) listed and swept), keeping the reference flag
  std::vector<ExpandedPolicy> unique;
  for (auto& p : out) {
    auto it = std::find_if(unique.begin(), unique.end(), [&](const ExpandedPolicy& u) { return u.label == p.label; });
    if (it == unique.end()) unique.push_back(std::move(p));
    else it->reference = it->reference || p.reference;
  }
  return unique;
}

}  // namespace sacb
