#include "sacb/multi_index.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sacb {

namespace {

void extend(int d, int budget, MultiIndex& prefix, std::vector<MultiIndex>& out) {
  if (static_cast<int>(prefix.size()) == d) {
    out.push_back(prefix);
    return;
  }
  for (int k = 0; k <= budget; ++k) {
    prefix.push_back(k);
    extend(d, budget - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int d, int degree) {
  if (d < 1 || degree < 0) throw std::invalid_argument("enumerate_multi_indices: need d >= 1, degree >= 0");
  std::vector<MultiIndex> out;
  MultiIndex prefix;
  prefix.reserve(d);
  extend(d, degree, prefix, out);
  return out;
}

std::size_t multi_index_count(int d, int degree) {
  // C(degree + d, d)
  std::size_t c = 1;
  for (int k = 1; k <= d; ++k) c = c * static_cast<std::size_t>(degree + k) / static_cast<std::size_t>(k);
  return c;
}

double monomial(std::span<const double> u, const MultiIndex& s) {
  double v = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int k = 0; k < s[i]; ++k) v *= u[i];
  return v;
}

int holder_floor(double beta) { return static_cast<int>(std::ceil(beta)) - 1; }

}  // namespace sacb
