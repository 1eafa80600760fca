#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sacb {

using MultiIndex = std::vector<int>;

// All s in N^d with |s| <= degree, lexicographic order.
std::vector<MultiIndex> enumerate_multi_indices(int d, int degree);

std::size_t multi_index_count(int d, int degree);

double monomial(std::span<const double> u, const MultiIndex& s);

// Largest integer strictly below beta.
int holder_floor(double beta);

}  // namespace sacb
