#include "sacb/exponents.hpp"

#include <algorithm>
#include <stdexcept>

#include "sacb/error.hpp"

namespace sacb {

double minimax_exponent(double beta, double alpha, int d) {
  if (!(beta > 0.0) || alpha < 0.0 || d < 1) throw std::invalid_argument("minimax_exponent: bad arguments");
  return 1.0 - beta * (1.0 + alpha) / (2.0 * beta + d);
}

double impossibility_exponent(double beta, double gamma, double alpha, int d, SmoothnessRegime regime) {
  if (d < 1 || alpha < 0.0) throw std::invalid_argument("impossibility_exponent: bad arguments");
  const double dd = d;
  if (regime == SmoothnessRegime::at_most_lipschitz) {
    constexpr double kSlack = 1e-12;
    if (!(beta > 0.0 && beta < gamma && gamma <= 1.0) || alpha > std::max(1.0, 1.0 / gamma) * (1.0 + kSlack))
      throw Error(ErrorKind::invalid_regime, "need 0 < beta < gamma <= 1 and alpha <= max(1, 1/gamma)");
    return 1.0 - (beta + dd) * (2.0 * gamma + dd - alpha * gamma) /
                     ((2.0 * gamma + dd) * (2.0 * beta + dd - alpha * beta));
  }
  if (beta != 1.0 || !(gamma > 1.0) || alpha > 1.0)
    throw Error(ErrorKind::invalid_regime, "need beta = 1 < gamma and alpha <= 1");
  return 1.0 - (2.0 * gamma + dd - gamma * alpha) / (2.0 * gamma + dd);
}

}  // namespace sacb
