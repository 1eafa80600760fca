#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sacb {

enum class ErrorKind {
  invalid_base,
  out_of_domain,
  horizon_too_small,
  ill_conditioned,
  insufficient_grid,
  degenerate_bumps,
  invalid_gap,
  invalid_regime,
  state_desync,
  parse_error,
  validation_error,
  missing_axis,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sacb
