#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sacb {

using Point = std::vector<double>;
using ScalarField = std::function<double(std::span<const double>)>;

enum class Arm : std::uint8_t { one = 1, two = 2 };

constexpr int index_of(Arm a) { return a == Arm::one ? 0 : 1; }
constexpr Arm arm_at(int index) { return index == 0 ? Arm::one : Arm::two; }
constexpr Arm other(Arm a) { return a == Arm::one ? Arm::two : Arm::one; }

// Axis-aligned closed box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(std::span<const double> x) const;
  Point center() const;

  static Box unit(int d);
};

}  // namespace sacb
