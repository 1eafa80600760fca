#include "sacb/types.hpp"

#include "sacb/error.hpp"

namespace sacb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_base: return "invalid-base";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::horizon_too_small: return "horizon-too-small";
    case ErrorKind::ill_conditioned: return "ill-conditioned";
    case ErrorKind::insufficient_grid: return "insufficient-grid";
    case ErrorKind::degenerate_bumps: return "degenerate-bumps";
    case ErrorKind::invalid_gap: return "invalid-gap";
    case ErrorKind::invalid_regime: return "invalid-regime";
    case ErrorKind::state_desync: return "state-desync";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
    case ErrorKind::missing_axis: return "missing-axis";
  }
  return "unknown";
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Point Box::center() const {
  Point c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Box Box::unit(int d) { return Box{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)}; }

}  // namespace sacb
