#pragma once

#include <cstddef>

namespace pdqp {

/// Inputs of the accelerated step-size rule: spectral-norm estimates of Q and
/// A plus the restart length K. An all-zero A is rejected (callers substitute
/// a positive placeholder when m = 0; the dual step is inert there).
struct StepSchedule {
  double norm_q = 0.0;
  double norm_a = 1.0;
  std::size_t restart_len = 1;

  void validate() const;
};

/// One inner iteration's step sizes.
struct StepSizes {
  double momentum;       ///< convex-combination weight of the running average
  double extrapolation;  ///< weight on (x_next - x) inside the dual update
  double primal_step;
  double dual_step;
};

/// Step sizes at inner index k (0 <= k < restart_len):
///   momentum      = 2 / (k + 2)            (1 at k = 0, decreasing)
///   extrapolation = k / (k + 1)            (0 at k = 0)
///   primal_step   = (k + 1) / (2 (|Q| + K |A|))
///   dual_step     = (k + 1) / (2 K |A|)
StepSizes schedule_at(const StepSchedule& s, std::size_t k);

}  // namespace pdqp
