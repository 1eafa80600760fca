#pragma once

#include <span>

#include "sacb/types.hpp"

namespace sacb {

struct QuadratureOptions {
  int nodes_per_axis = 256;
};

// Local polynomial projection of f around x, restricted to the bin:
// the degree-`degree` weighted least-squares fit of f on the window of
// half-width h around x intersected with the bin, weighted by the density.
// The returned field evaluates that fit at its own center for any x in bin.
ScalarField project_to_polynomial(ScalarField f, Box bin, int degree, double h, ScalarField density,
                                  QuadratureOptions opts = {});

double projection_at(const ScalarField& f, const Box& bin, int degree, double h, const ScalarField& density,
                     std::span<const double> x, QuadratureOptions opts = {});

// Discrete least-squares reference on a grid of grid_n cell centers per axis.
ScalarField brute_force_projection(ScalarField f, Box bin, int degree, double h, ScalarField density, int grid_n);

// Constant L0 with |projection(f) - f| <= L0 * h^beta on the bin for every f
// that is (beta, L)-Hoelder. Maximized over probe_per_axis^d points of the bin.
double projection_bias_constant(const Box& bin, int degree, double h, const ScalarField& density, double beta,
                                double lipschitz, QuadratureOptions opts = {}, int probe_per_axis = 9);

}  // namespace sacb
