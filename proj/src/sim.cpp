#include "sacb/sim.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sacb/rng.hpp"

namespace sacb {

RegretTrace run_episode(const ProblemInstance& inst, Policy& policy, std::int64_t horizon, std::uint64_t seed,
                        const EpisodeOptions& opts) {
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
  const std::int64_t stride = opts.checkpoint_stride > 0 ? opts.checkpoint_stride : std::max<std::int64_t>(1, horizon / 100);
  RegretTrace tr;
  tr.seed = seed;
  if (opts.record_actions) tr.actions.reserve(static_cast<std::size_t>(horizon));
  std::vector<double> x(static_cast<std::size_t>(inst.d));
  double regret = 0.0;
  std::int64_t inferior = 0;
  std::int64_t t = 1;
  for (; t <= horizon; ++t) {
    const auto tu = static_cast<std::uint64_t>(t);
    inst.covariates.sample(seed, tu, x);
    const Arm arm = policy.choose(x);
    const double m1 = inst.f1(x);
    const double m2 = inst.f2(x);
    const double chosen = arm == Arm::one ? m1 : m2;
    const double best = m2 > m1 ? m2 : m1;
    policy.update(x, arm, inst.reward_from_mean(arm, chosen, seed, tu));
    regret += best - chosen;
    if (chosen < best) ++inferior;
    if (opts.record_actions) tr.actions.push_back(static_cast<std::uint8_t>(arm));
    if (opts.observer) opts.observer(t, x, arm, policy);
    if (t % stride == 0 || t == horizon) tr.checkpoints.push_back({t, regret, inferior});
    if (opts.stop_after_handoff && policy.estimation_end()) break;
  }
  tr.steps = std::min(t, horizon);
  tr.regret = regret;
  tr.inferior = inferior;
  tr.estimation_end = policy.estimation_end();
  tr.beta_hat = policy.smoothness_estimate();
  return tr;
}

std::vector<ExperimentResult> run_experiment(const ProblemInstance& inst, std::span<const PolicySpec> policies,
                                             const ExperimentSpec& spec) {
  if (spec.reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  std::vector<ExperimentResult> out(policies.size());
  for (std::size_t p = 0; p < policies.size(); ++p) {
    out[p].label = policies[p].label;
    out[p].traces.resize(static_cast<std::size_t>(spec.reps));
  }
  const std::size_t units = policies.size() * static_cast<std::size_t>(spec.reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t u = next.fetch_add(1);
      if (u >= units) return;
      const std::size_t p = u / static_cast<std::size_t>(spec.reps);
      const std::size_t r = u % static_cast<std::size_t>(spec.reps);
      try {
        auto policy = policies[p].make(inst, static_cast<double>(spec.horizon));
        const std::uint64_t seed = rng::replication_seed(spec.base_seed, r);
        out[p].traces[r] = run_episode(inst, *policy, spec.horizon, seed, spec.episode);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(units);
      }
    }
  };
  const int threads = std::max(1, spec.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Summary summarize(const std::string& label, std::span<const RegretTrace> traces) {
  Summary s;
  s.label = label;
  s.reps = static_cast<int>(traces.size());
  if (traces.empty()) return s;
  const double n = static_cast<double>(traces.size());
  double sum = 0.0, inferior = 0.0;
  for (const auto& t : traces) {
    sum += t.regret;
    inferior += static_cast<double>(t.inferior);
  }
  s.mean_regret = sum / n;
  s.mean_inferior = inferior / n;
  if (traces.size() >= 2) {
    double ss = 0.0;
    for (const auto& t : traces) ss += (t.regret - s.mean_regret) * (t.regret - s.mean_regret);
    s.sd = std::sqrt(ss / (n - 1.0));
    s.ci95 = 1.96 * s.sd / std::sqrt(n);
  }
  double ends = 0.0, betas = 0.0;
  int n_end = 0, n_beta = 0;
  for (const auto& t : traces) {
    if (t.estimation_end) {
      ends += static_cast<double>(*t.estimation_end);
      ++n_end;
    }
    if (t.beta_hat) {
      betas += *t.beta_hat;
      ++n_beta;
      ++s.beta_hat_histogram[*t.beta_hat];
    }
  }
  if (n_end > 0) s.mean_estimation_end = ends / n_end;
  if (n_beta > 0) s.mean_beta_hat = betas / n_beta;
  const std::size_t points = traces.front().checkpoints.size();
  bool aligned = true;
  for (const auto& t : traces) aligned = aligned && t.checkpoints.size() == points;
  if (aligned) {
    s.mean_curve.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
      double r = 0.0, inf = 0.0;
      for (const auto& t : traces) {
        r += t.checkpoints[k].regret;
        inf += static_cast<double>(t.checkpoints[k].inferior);
      }
      s.mean_curve[k] = {traces.front().checkpoints[k].t, r / n, static_cast<std::int64_t>(std::llround(inf / n))};
    }
  }
  return s;
}

}  // namespace sacb
