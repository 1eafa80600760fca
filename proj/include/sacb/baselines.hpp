#pragma once

#include "sacb/instance.hpp"
#include "sacb/policy.hpp"

namespace sacb {

// Plays the arm with the larger mean payoff; ties go to arm one.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const ProblemInstance& inst) : inst_(&inst) {}
  Arm choose(std::span<const double> x) override;
  void update(std::span<const double>, Arm, double) override {}
  std::string name() const override { return "Oracle"; }

 private:
  const ProblemInstance* inst_;
};

class FixedArmPolicy final : public Policy {
 public:
  explicit FixedArmPolicy(Arm arm) : arm_(arm) {}
  Arm choose(std::span<const double>) override { return arm_; }
  void update(std::span<const double>, Arm, double) override {}
  std::string name() const override { return arm_ == Arm::one ? "Fixed(1)" : "Fixed(2)"; }

 private:
  Arm arm_;
};

}  // namespace sacb
