#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "sacb/types.hpp"

namespace sacb {

class Policy {
 public:
  virtual ~Policy() = default;

  virtual Arm choose(std::span<const double> x) = 0;
  virtual void update(std::span<const double> x, Arm arm, double reward) = 0;
  virtual std::string name() const = 0;

  // Only adaptive policies report these.
  virtual std::optional<std::int64_t> estimation_end() const { return std::nullopt; }
  virtual std::optional<double> smoothness_estimate() const { return std::nullopt; }
};

}  // namespace sacb
