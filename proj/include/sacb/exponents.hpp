#pragma once

namespace sacb {

enum class SmoothnessRegime { at_most_lipschitz, at_least_lipschitz };

// Regret exponent of the minimax rate T^{1 - beta(1+alpha)/(2beta+d)}.
double minimax_exponent(double beta, double alpha, int d);

// Exponent of the regret any policy minimax-optimal for gamma must pay on
// some beta-smooth instance.
double impossibility_exponent(double beta, double gamma, double alpha, int d, SmoothnessRegime regime);

}  // namespace sacb
