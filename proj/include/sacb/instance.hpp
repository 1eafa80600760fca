#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "sacb/types.hpp"

namespace sacb {

// Product density on [0,1]^d with per-axis profile 1 + tilt * (x - 1/2).
// tilt = 0 is the uniform distribution; |tilt| < 2 keeps the density positive.
class CovariateSampler {
 public:
  CovariateSampler() = default;
  CovariateSampler(int d, double tilt);

  int dim() const { return d_; }
  double tilt() const { return tilt_; }
  double density(std::span<const double> x) const;
  double density_lower() const;
  double density_upper() const;
  void sample(std::uint64_t seed, std::uint64_t t, std::span<double> out) const;
  ScalarField density_field() const;

 private:
  int d_ = 1;
  double tilt_ = 0.0;
};

enum class NoiseKind { bernoulli, gaussian };

struct NoiseModel {
  NoiseKind kind = NoiseKind::bernoulli;
  double sigma = 0.05;
};

struct InstanceMeta {
  std::string name;
  std::optional<double> beta;
  std::optional<double> lipschitz;
  std::optional<double> margin_alpha;
  std::optional<double> margin_constant;
  std::optional<double> bias_constant;  // b in the self-similarity bound
  std::optional<double> bias_level;     // l0 in the self-similarity bound
  std::map<std::string, double> params;
};

struct ProblemInstance {
  int d = 1;
  ScalarField f1;
  ScalarField f2;
  CovariateSampler covariates;
  NoiseModel noise;
  InstanceMeta meta;

  double payoff(Arm a, std::span<const double> x) const { return a == Arm::one ? f1(x) : f2(x); }
  // Noisy reward for arm a at step t; the draw depends only on (seed, t, arm).
  double reward(Arm a, std::span<const double> x, std::uint64_t seed, std::uint64_t t) const;
  double reward_from_mean(Arm a, double mean, std::uint64_t seed, std::uint64_t t) const;
};

}  // namespace sacb
