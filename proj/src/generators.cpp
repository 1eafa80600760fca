#include "sacb/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sacb/error.hpp"

namespace sacb {

double bump(double x, double beta) {
  const double a = std::abs(x);
  return a <= 1.0 ? std::pow(1.0 - a, beta) : 0.0;
}

BumpShape setting_one_shape() { return BumpShape{}; }

BumpShape setting_two_shape() {
  BumpShape s;
  s.tau = 0.6;
  s.alpha = 0.0;
  s.amplitude = 50.0;
  return s;
}

double setting_one_bump_scale(double beta, double horizon, const BumpShape& s) {
  const double inner = (1.0 / (2.0 * s.c0)) * std::pow(2.0 * std::numbers::ln2 / horizon, -s.tau / (2.0 * s.tau + 1.0));
  return std::pow(std::floor(inner), 1.0 / beta) / 16.0;
}

double setting_two_bump_scale(double horizon, const BumpShape& s) {
  const double e = std::ceil(std::log2(horizon / (2.0 * std::numbers::ln2)) / (s.tau + 1.0));
  return std::exp2(e) / 4.0;
}

ProblemInstance make_bump_instance(double beta, double bump_scale, const BumpShape& s, const std::string& name) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("bump instance: beta must lie in (0,1]");
  const double alpha = s.alpha > 0.0 ? s.alpha : 1.0 / beta;
  const double big_m = bump_scale;
  if (!(big_m > 0.0)) throw Error(ErrorKind::degenerate_bumps, "bump scale must be positive");
  const double count_raw = std::floor(std::pow(big_m, 1.0 - alpha * beta));
  if (count_raw < 1.0) throw Error(ErrorKind::degenerate_bumps, "fewer than one bump");
  const int count = static_cast<int>(count_raw);
  const double height = std::pow(2.0 * big_m, -beta) * s.amplitude;
  const double slope = s.left_slope;
  const double left_offset = 1.0 + slope * std::pow(0.5, beta);

  auto left = [=](double x) { return 0.5 * (left_offset - slope * std::pow(x, beta)); };
  auto right = [=](double x) {
    const double u = 2.0 - 2.0 * x;
    const double um = u * big_m;
    const int lo = std::max(1, static_cast<int>(std::floor(um)) - 1);
    const int hi = std::min(count, static_cast<int>(std::floor(um)) + 1);
    double v = 0.5;
    for (int j = lo; j <= hi; ++j) {
      const double center = (j + 0.5) / big_m;
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      v += sign * height * bump(2.0 * big_m * (u - center), beta);
    }
    return v;
  };

  ProblemInstance inst;
  inst.d = 1;
  inst.f1 = [=](std::span<const double> x) { return x[0] <= 0.5 ? left(x[0]) : right(x[0]); };
  inst.f2 = [=](std::span<const double> x) { return x[0] <= 0.5 ? left(x[0]) : 0.5; };
  inst.covariates = CovariateSampler(1, 0.0);
  inst.noise = NoiseModel{NoiseKind::gaussian, s.sigma};
  inst.meta.name = name;
  inst.meta.beta = beta;
  inst.meta.lipschitz = std::pow(2.0, 1.0 - beta) * std::max(0.5 * slope, s.amplitude * std::pow(2.0, beta));
  inst.meta.margin_alpha = alpha;
  if (alpha <= 1.0 / beta + 1e-12) inst.meta.margin_constant = count / (2.0 * big_m) * std::pow(height, -alpha);
  inst.meta.params = {{"M", big_m},
                      {"bumps", static_cast<double>(count)},
                      {"height", height},
                      {"continuous", (count + 1.0) / big_m <= 1.0 ? 1.0 : 0.0}};
  return inst;
}

ProblemInstance make_setting_one(double beta, double horizon, const BumpShape& s) {
  const double m = s.bump_scale.value_or(setting_one_bump_scale(beta, horizon, s));
  return make_bump_instance(beta, m, s, "setting1");
}

ProblemInstance make_setting_two(double beta, double horizon, const BumpShape& s) {
  const double m = s.bump_scale.value_or(setting_two_bump_scale(horizon, s));
  return make_bump_instance(beta, m, s, "setting2");
}

ProblemInstance make_power_payoff(double beta, double delta, NoiseModel noise) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("power payoff: beta must lie in (0,1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("power payoff: delta must lie in (0,1]");
  const double knee = std::pow(delta, 1.0 / beta);
  ProblemInstance inst;
  inst.d = 1;
  inst.f1 = [=](std::span<const double> x) { return x[0] <= knee ? std::pow(x[0], beta) : delta; };
  inst.f2 = [](std::span<const double>) { return 0.5; };
  inst.covariates = CovariateSampler(1, 0.0);
  inst.noise = noise;
  inst.meta.name = "power";
  inst.meta.beta = beta;
  inst.meta.lipschitz = 1.0;
  inst.meta.bias_constant = 1.0 / (beta + 1.0);
  inst.meta.bias_level = -std::log2(delta) / beta;
  // sup_t P(0 < |f1 - 1/2| <= t) / t on a fine midpoint grid
  constexpr int kCells = 200000;
  std::vector<double> gaps;
  gaps.reserve(kCells);
  for (int k = 0; k < kCells; ++k) {
    const double x = (k + 0.5) / kCells;
    const double g = std::abs((x <= knee ? std::pow(x, beta) : delta) - 0.5);
    if (g > 0.0) gaps.push_back(g);
  }
  std::sort(gaps.begin(), gaps.end());
  double worst = 0.0;
  for (int k = 1; k <= 2000; ++k) {
    const double t = k / 2000.0;
    const auto n = std::upper_bound(gaps.begin(), gaps.end(), t) - gaps.begin();
    worst = std::max(worst, (static_cast<double>(n) / kCells + 1.0 / kCells) / t);
  }
  inst.meta.margin_alpha = 1.0;
  inst.meta.margin_constant = worst * 1.01;
  inst.meta.params = {{"delta", delta}};
  return inst;
}

namespace {

double sup_norm(std::span<const double> z) {
  double n = 0.0;
  for (double v : z) n = std::max(n, std::abs(v));
  return n;
}

double psi_tilde(std::span<const double> z, double kappa) {
  const double n = sup_norm(z);
  return n <= 1.0 ? std::pow(1.0 - n, kappa) : 0.0;
}

double psi_hat(std::span<const double> z, double kappa) {
  const double n = sup_norm(z);
  if (n <= 1.0) return std::pow(1.0 - n, kappa);
  if (n <= 2.0) return -std::pow(n - 1.0, kappa);
  return -1.0;
}

}  // namespace

std::vector<ProblemInstance> make_lower_bound_family(const LowerBoundSpec& spec, NoiseModel noise) {
  const int d = spec.d;
  const double beta = spec.beta;
  const double gamma = spec.gamma;
  const double delta = spec.delta;
  const double lip = spec.lipschitz;
  if (d < 1) throw std::invalid_argument("lower bound family: d must be >= 1");
  if (!(delta > 0.0) || delta > 0.25) throw Error(ErrorKind::invalid_gap, "gap must lie in (0, 1/4]");
  if (!(beta > 0.0 && beta < gamma)) throw Error(ErrorKind::invalid_regime, "need 0 < beta < gamma");

  auto base = [&](const std::string& name) {
    ProblemInstance inst;
    inst.d = d;
    inst.f2 = [](std::span<const double>) { return 0.5; };
    inst.covariates = CovariateSampler(d, 0.0);
    inst.noise = noise;
    inst.meta.name = name;
    inst.meta.lipschitz = lip;
    inst.meta.params = {{"delta", delta}};
    return inst;
  };

  std::vector<ProblemInstance> family;
  if (spec.variant == LowerBoundVariant::at_most_lipschitz) {
    if (gamma > 1.0) throw Error(ErrorKind::invalid_regime, "at-most-Lipschitz family needs gamma <= 1");
    const double c_phi = lip / std::pow(2.0, 2.0 + 2.0 * beta);
    const double raw = std::floor(std::pow(delta, spec.alpha - d / beta));
    if (raw < 1.0) throw Error(ErrorKind::invalid_gap, "fewer than one alternative cell");
    const int per_axis = std::max(1, static_cast<int>(std::floor(std::pow(raw, 1.0 / d) + 1e-9)));
    int cells = 1;
    for (int i = 0; i < d; ++i) cells *= per_axis;
    const double radius = std::pow(delta, spec.alpha / d);
    if (2.0 * radius > 1.0) throw Error(ErrorKind::invalid_gap, "support of the nominal dip leaves the unit cube");
    const double side = 2.0 * radius / per_axis;
    const double ell = radius / (4.0 * std::pow(static_cast<double>(cells), 1.0 / d));
    const double dip_scale = std::pow(delta, spec.alpha * gamma / d);

    auto nominal = [=](std::span<const double> x) {
      std::vector<double> z(d);
      for (int i = 0; i < d; ++i) z[i] = (x[i] - radius) / radius;
      return 0.5 - c_phi * std::min(delta, dip_scale * psi_tilde(z, gamma));
    };
    ProblemInstance nom = base("lower_bound_nominal");
    nom.f1 = nominal;
    nom.meta.beta = gamma;
    nom.meta.params["cells"] = cells;
    nom.meta.params["ell"] = ell;
    family.push_back(std::move(nom));

    for (int c = 0; c < cells; ++c) {
      std::vector<double> center(d);
      int rem = c;
      for (int i = d - 1; i >= 0; --i) {
        center[i] = (rem % per_axis + 0.5) * side;
        rem /= per_axis;
      }
      ProblemInstance alt = base("lower_bound_alternative");
      alt.f1 = [=](std::span<const double> x) {
        std::vector<double> z(d);
        for (int i = 0; i < d; ++i) z[i] = 2.0 * (x[i] - center[i]) / ell;
        return std::max(nominal(x), 0.5 + c_phi * delta * psi_hat(z, beta));
      };
      alt.meta.beta = beta;
      alt.meta.params["cells"] = cells;
      alt.meta.params["ell"] = ell;
      alt.meta.params["cell_index"] = c;
      family.push_back(std::move(alt));
    }
  } else {
    if (beta != 1.0 || !(gamma > 1.0))
      throw Error(ErrorKind::invalid_regime, "at-least-Lipschitz family needs beta = 1 < gamma");
    const double c_phi = lip / 4.0;
    auto nominal = [=](std::span<const double> x) { return 0.5 - c_phi * (0.5 - x[0]); };
    const double center = 0.5 * (1.0 - delta);
    ProblemInstance nom = base("lower_bound_nominal");
    nom.f1 = nominal;
    nom.meta.beta = gamma;
    nom.meta.lipschitz = c_phi;
    family.push_back(std::move(nom));
    ProblemInstance alt = base("lower_bound_alternative");
    alt.f1 = [=](std::span<const double> x) {
      const double z = 2.0 * (x[0] - center) / delta;
      return nominal(x) + 2.0 * c_phi * delta * std::max(0.0, 1.0 - std::abs(z));
    };
    alt.meta.beta = 1.0;
    alt.meta.lipschitz = 5.0 * c_phi;
    family.push_back(std::move(alt));
  }
  return family;
}

}  // namespace sacb
