#include "sacb/baselines.hpp"

namespace sacb {

Arm OraclePolicy::choose(std::span<const double> x) {
  return inst_->f2(x) > inst_->f1(x) ? Arm::two : Arm::one;
}

}  // namespace sacb
