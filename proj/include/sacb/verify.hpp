#pragma once

#include <span>
#include <string>
#include <vector>

#include "sacb/instance.hpp"
#include "sacb/projection.hpp"

namespace sacb {

struct PropertyReport {
  bool holds = true;
  Point witness;        // worst point
  Point witness_other;  // second point of the worst pair, when applicable
  double margin_of_violation = 0.0;  // >= 0 iff holds
  std::string detail;
};

// Hoelder condition for both arms on a grid of grid_n points per axis.
// beta in (1,2] uses a finite-difference gradient.
PropertyReport check_holder(const ProblemInstance& inst, double beta, double lipschitz, int grid_n);

// P(0 < |f1 - f2| <= delta) <= C0 delta^alpha for every delta in the list.
PropertyReport check_margin(const ProblemInstance& inst, double alpha, double c0, int grid_n,
                            std::span<const double> deltas);

struct SelfSimilarityOptions {
  QuadratureOptions quadrature{};
  int points_per_bin = 9;
  double relative_tolerance = 1e-6;
};

// For every integer level l in [l0, l_max], some bin of side q^-l and some arm
// has sup |projection - f| >= b q^{-l beta}. Bins are anchored at the origin.
PropertyReport check_self_similarity(const ProblemInstance& inst, double beta, double b, double l0, int l_max,
                                     double q, int degree, SelfSimilarityOptions opts = {});

}  // namespace sacb
