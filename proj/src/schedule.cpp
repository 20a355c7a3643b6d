#include "pdqp/schedule.hpp"

#include <cmath>

#include "pdqp/errors.hpp"

namespace pdqp {

void StepSchedule::validate() const {
  if (!(norm_q >= 0.0) || !std::isfinite(norm_q))
    throw ContractViolation("schedule: norm_q must be finite and >= 0");
  if (!(norm_a > 0.0) || !std::isfinite(norm_a))
    throw ContractViolation("schedule: norm_a must be finite and > 0");
  if (restart_len < 1) throw ContractViolation("schedule: restart_len must be >= 1");
}

StepSizes schedule_at(const StepSchedule& s, std::size_t k) {
  s.validate();
  if (k >= s.restart_len) throw ContractViolation("schedule: k out of range");
  const double kd = static_cast<double>(k);
  const double big_k = static_cast<double>(s.restart_len);
  StepSizes out;
  out.momentum = 2.0 / (kd + 2.0);
  out.extrapolation = kd / (kd + 1.0);
  out.primal_step = (kd + 1.0) / (2.0 * (s.norm_q + big_k * s.norm_a));
  out.dual_step = (kd + 1.0) / (2.0 * big_k * s.norm_a);
  return out;
}

}  // namespace pdqp
