#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "sacb/types.hpp"

namespace sacb {

struct BinId {
  std::vector<int> coords;
  auto operator<=>(const BinId&) const = default;
};

// Uniform grid of per_axis^d congruent bins over [0,1]^d.
class Partition {
 public:
  Partition(int d, double base, int level);

  int dim() const { return d_; }
  double base() const { return base_; }
  int level() const { return level_; }
  int per_axis() const { return per_axis_; }
  std::size_t bin_count() const { return count_; }

  BinId locate(std::span<const double> x) const;
  std::size_t locate_index(std::span<const double> x) const;
  Box bounds(const BinId& b) const;
  std::size_t index_of(const BinId& b) const;
  BinId bin_at(std::size_t index) const;

 private:
  int d_;
  double base_;
  int level_;
  int per_axis_;
  std::size_t count_;
};

Partition build_partition(int d, double base, int level);

// log base q of x
double log_base(double x, double q);

struct SacbLevels {
  int partition_level = 0;  // l
  int max_round = 0;        // r-bar
  int coarse_level = 0;     // j1, bandwidth q^-j1
  int fine_level = 0;       // j2, bandwidth q^-j2
  int mesh_level = 0;       // l-tilde
};

SacbLevels sacb_levels(double horizon, int d, double base, double beta_lo, double beta_hi, double upsilon);

inline constexpr double kMaxMeshPoints = 1e7;

// Grid points m / round(q^mesh_level), m >= 1 per axis, inside the closed bin.
// Falls back to the bin center when the bin holds no grid point; throws past kMaxMeshPoints.
std::vector<Point> mesh_points(const BinId& bin, const Partition& partition, int mesh_level);

// Number of grid points per axis for a mesh level.
std::int64_t mesh_resolution(double base, int mesh_level);

}  // namespace sacb
