#pragma once

#include <cstdint>

namespace sacb::rng {

enum class Purpose : std::uint64_t { covariate = 1, noise = 2, policy = 3 };

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of replication `rep` under `base_seed`.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t rep);

// Counter-based draws: the value depends only on (seed, t, purpose, lane).
std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t t, Purpose purpose, std::uint64_t lane);
// Uniform on the open interval (0,1).
double uniform(std::uint64_t seed, std::uint64_t t, Purpose purpose, std::uint64_t lane);
double standard_normal(std::uint64_t seed, std::uint64_t t, Purpose purpose, std::uint64_t lane);

}  // namespace sacb::rng
