#include "sacb/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sacb/error.hpp"

namespace sacb {

Partition::Partition(int d, double base, int level) : d_(d), base_(base), level_(level) {
  if (d < 1) throw std::invalid_argument("Partition: d must be >= 1");
  if (!(base > 1.0)) throw Error(ErrorKind::invalid_base, "base must exceed 1");
  if (level < 0) throw std::invalid_argument("Partition: negative level");
  const double raw = std::round(std::pow(base, level));
  if (raw > static_cast<double>(std::numeric_limits<int>::max()))
    throw std::invalid_argument("Partition: too many bins per axis");
  per_axis_ = std::max(1, static_cast<int>(raw));
  count_ = 1;
  for (int i = 0; i < d; ++i) count_ *= static_cast<std::size_t>(per_axis_);
}

BinId Partition::locate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("locate: dimension mismatch");
  BinId b{std::vector<int>(d_)};
  for (int i = 0; i < d_; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) throw Error(ErrorKind::out_of_domain, "covariate outside [0,1]^d");
    b.coords[i] = std::min(per_axis_ - 1, static_cast<int>(std::floor(x[i] * per_axis_)));
  }
  return b;
}

std::size_t Partition::locate_index(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("locate: dimension mismatch");
  std::size_t index = 0;
  for (int i = 0; i < d_; ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) throw Error(ErrorKind::out_of_domain, "covariate outside [0,1]^d");
    const int c = std::min(per_axis_ - 1, static_cast<int>(std::floor(x[i] * per_axis_)));
    index = index * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(c);
  }
  return index;
}

Box Partition::bounds(const BinId& b) const {
  Box box{std::vector<double>(d_), std::vector<double>(d_)};
  for (int i = 0; i < d_; ++i) {
    box.lo[i] = static_cast<double>(b.coords[i]) / per_axis_;
    box.hi[i] = static_cast<double>(b.coords[i] + 1) / per_axis_;
  }
  return box;
}

std::size_t Partition::index_of(const BinId& b) const {
  std::size_t index = 0;
  for (int i = 0; i < d_; ++i) index = index * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(b.coords[i]);
  return index;
}

BinId Partition::bin_at(std::size_t index) const {
  BinId b{std::vector<int>(d_)};
  for (int i = d_ - 1; i >= 0; --i) {
    b.coords[i] = static_cast<int>(index % static_cast<std::size_t>(per_axis_));
    index /= static_cast<std::size_t>(per_axis_);
  }
  return b;
}

Partition build_partition(int d, double base, int level) { return Partition(d, base, level); }

double log_base(double x, double q) { return std::log(x) / std::log(q); }

SacbLevels sacb_levels(double horizon, int d, double base, double beta_lo, double beta_hi, double upsilon) {
  if (!(base > 1.0)) throw Error(ErrorKind::invalid_base, "base must exceed 1");
  if (d < 1) throw std::invalid_argument("sacb_levels: d must be >= 1");
  if (!(beta_lo > 0.0 && beta_lo <= beta_hi)) throw std::invalid_argument("sacb_levels: need 0 < beta_lo <= beta_hi");
  if (!(horizon > 1.0)) throw Error(ErrorKind::horizon_too_small, "horizon must exceed 1");
  const double loglog = log_base(std::log(horizon), base);
  if (!(loglog > 0.0)) throw Error(ErrorKind::horizon_too_small, "log log horizon is not positive");
  const double dd = d;
  SacbLevels lv;
  const double spread = 2.0 * beta_hi + dd;
  lv.partition_level = static_cast<int>(std::ceil((beta_lo + dd - 1.0) * log_base(horizon, base) / (spread * spread)));
  const double l = lv.partition_level;
  lv.max_round = static_cast<int>(std::ceil(2.0 * l * beta_hi + upsilon * loglog));
  lv.coarse_level = lv.partition_level;
  lv.fine_level = lv.partition_level + static_cast<int>(std::ceil(loglog / beta_lo));
  lv.mesh_level = static_cast<int>(std::max(std::ceil(beta_hi * l / beta_lo + loglog / beta_lo),
                                            std::ceil((1.0 + beta_hi) * l + loglog)));
  return lv;
}

std::int64_t mesh_resolution(double base, int mesh_level) {
  const double g = std::round(std::pow(base, mesh_level));
  if (g > 1e12) throw std::invalid_argument("mesh_resolution: mesh too fine");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(g));
}

std::vector<Point> mesh_points(const BinId& bin, const Partition& partition, int mesh_level) {
  const int d = partition.dim();
  const std::int64_t g = mesh_resolution(partition.base(), mesh_level);
  const std::int64_t p = partition.per_axis();
  std::vector<std::int64_t> first(d), last(d);
  bool empty = false;
  for (int i = 0; i < d; ++i) {
    const std::int64_t c = bin.coords[i];
    // m/g in [c/p, (c+1)/p]  <=>  m*p in [c*g, (c+1)*g]
    first[i] = std::max<std::int64_t>(1, (c * g + p - 1) / p);
    last[i] = ((c + 1) * g) / p;
    if (first[i] > last[i]) empty = true;
  }
  if (empty) return {partition.bounds(bin).center()};
  double count = 1.0;
  for (int i = 0; i < d; ++i) count *= static_cast<double>(last[i] - first[i] + 1);
  if (count > kMaxMeshPoints) throw std::invalid_argument("mesh_points: mesh too fine");
  std::vector<Point> out;
  std::vector<std::int64_t> m(first);
  while (true) {
    Point x(d);
    for (int i = 0; i < d; ++i) x[i] = static_cast<double>(m[i]) / static_cast<double>(g);
    out.push_back(std::move(x));
    int i = d - 1;
    while (i >= 0 && ++m[i] > last[i]) {
      m[i] = first[i];
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace sacb
