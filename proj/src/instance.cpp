#include "sacb/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sacb/rng.hpp"

namespace sacb {

CovariateSampler::CovariateSampler(int d, double tilt) : d_(d), tilt_(tilt) {
  if (d < 1) throw std::invalid_argument("CovariateSampler: d must be >= 1");
  if (!(std::abs(tilt) < 2.0)) throw std::invalid_argument("CovariateSampler: |tilt| must be < 2");
}

double CovariateSampler::density(std::span<const double> x) const {
  double p = 1.0;
  for (int i = 0; i < d_; ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) return 0.0;
    p *= 1.0 + tilt_ * (x[i] - 0.5);
  }
  return p;
}

double CovariateSampler::density_lower() const { return std::pow(1.0 - 0.5 * std::abs(tilt_), d_); }
double CovariateSampler::density_upper() const { return std::pow(1.0 + 0.5 * std::abs(tilt_), d_); }

void CovariateSampler::sample(std::uint64_t seed, std::uint64_t t, std::span<double> out) const {
  for (int i = 0; i < d_; ++i) {
    const double u = rng::uniform(seed, t, rng::Purpose::covariate, static_cast<std::uint64_t>(i));
    if (tilt_ == 0.0) {
      out[i] = u;
    } else {
      // inverse of F(x) = x + tilt (x^2 - x) / 2
      const double b = 1.0 - 0.5 * tilt_;
      out[i] = std::clamp(2.0 * u / (b + std::sqrt(b * b + 2.0 * tilt_ * u)), 0.0, 1.0);
    }
  }
}

ScalarField CovariateSampler::density_field() const {
  return [self = *this](std::span<const double> x) { return self.density(x); };
}

double ProblemInstance::reward_from_mean(Arm a, double mean, std::uint64_t seed, std::uint64_t t) const {
  const auto lane = static_cast<std::uint64_t>(index_of(a));
  if (noise.kind == NoiseKind::gaussian)
    return mean + noise.sigma * rng::standard_normal(seed, t, rng::Purpose::noise, lane);
  return rng::uniform(seed, t, rng::Purpose::noise, lane) < mean ? 1.0 : 0.0;
}

double ProblemInstance::reward(Arm a, std::span<const double> x, std::uint64_t seed, std::uint64_t t) const {
  return reward_from_mean(a, payoff(a, x), seed, t);
}

}  // namespace sacb
