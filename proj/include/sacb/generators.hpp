#pragma once

#include <optional>
#include <vector>

#include "sacb/instance.hpp"

namespace sacb {

// (1 - |x|)^beta on [-1,1], zero elsewhere.
double bump(double x, double beta);

// Shape parameters of the one-dimensional piecewise benchmark family:
// a shared decreasing left branch on [0,1/2] and alternating bumps on the
// right branch of arm one.
struct BumpShape {
  double tau = 0.8;
  double alpha = 0.01;  // margin exponent; <= 0 means 1/beta
  double left_slope = 1.0;
  double amplitude = 1.0;
  double c0 = 2.0;
  double sigma = 0.05;
  std::optional<double> bump_scale;  // overrides the computed M
};

BumpShape setting_one_shape();
BumpShape setting_two_shape();

// M for the two horizon-dependent settings.
double setting_one_bump_scale(double beta, double horizon, const BumpShape& s);
double setting_two_bump_scale(double horizon, const BumpShape& s);

ProblemInstance make_setting_one(double beta, double horizon, const BumpShape& s = setting_one_shape());
ProblemInstance make_setting_two(double beta, double horizon, const BumpShape& s = setting_two_shape());
// Generic member of the family for an explicit M.
ProblemInstance make_bump_instance(double beta, double bump_scale, const BumpShape& s, const std::string& name);

// f1(x) = x^beta up to x = delta^(1/beta), constant afterwards; f2 = 1/2.
ProblemInstance make_power_payoff(double beta, double delta, NoiseModel noise = {});

enum class LowerBoundVariant { at_most_lipschitz, at_least_lipschitz };

struct LowerBoundSpec {
  double beta = 0.5;
  double gamma = 0.9;
  double alpha = 1.0;
  double delta = 0.1;
  LowerBoundVariant variant = LowerBoundVariant::at_most_lipschitz;
  double lipschitz = 1.0;
  int d = 1;
};

// First element is the nominal instance; the rest are the alternatives.
std::vector<ProblemInstance> make_lower_bound_family(const LowerBoundSpec& spec, NoiseModel noise = {});

}  // namespace sacb
