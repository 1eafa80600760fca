#include "sacb/rng.hpp"

#include <cmath>
#include <numbers>

namespace sacb::rng {

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t rep) {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(rep + 0x5851f42d4c957f2dULL));
}

std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t t, Purpose purpose, std::uint64_t lane) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ t);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(purpose) << 56) ^ lane);
  return h;
}

double uniform(std::uint64_t seed, std::uint64_t t, Purpose purpose, std::uint64_t lane) {
  return (static_cast<double>(draw_bits(seed, t, purpose, lane) >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::uint64_t seed, std::uint64_t t, Purpose purpose, std::uint64_t lane) {
  const double u1 = uniform(seed, t, purpose, 2 * lane);
  const double u2 = uniform(seed, t, purpose, 2 * lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sacb::rng
