#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pdqp/instance.hpp"
#include "pdqp/residuals.hpp"
#include "pdqp/schedule.hpp"

namespace pdqp {

enum class Termination : std::uint8_t { Converged = 0, MaxIter = 1 };

struct SolverConfig {
  std::size_t restart_len = 0;  ///< inner steps per restart; 0 = auto (64 max(|Q|,|A|)/|A|, rounded up)
  std::size_t max_outer = 1000;
  double tol = 1e-6;
  std::optional<PrimalDualPoint> warm_start;  ///< projected onto bounds / dual cone before use
  int norm_iters = 100;                       ///< power-iteration steps for |Q|, |A|
  std::size_t check_every = 40;               ///< residual-check cadence, in inner steps
  double eps_normalization = 1e-8;
  bool record_restarts = false;  ///< keep the z_n sequence for convergence diagnostics
  std::uint64_t norm_seed = 20240601;
};

struct SolveReport {
  PrimalDualPoint point;
  std::size_t iterations = 0;       ///< total inner steps
  std::size_t outer_restarts = 0;
  double wall_seconds = 0.0;
  Termination termination = Termination::MaxIter;
  KktResiduals final_residuals;
  std::vector<PrimalDualPoint> restart_points;  ///< filled iff record_restarts
};

struct SolverState {
  std::vector<double> x;
  std::vector<double> x_bar;
  std::vector<double> y;
  std::size_t inner_k = 0;
  std::size_t outer_n = 0;
};

/// Scratch buffers reused across inner steps; no allocation happens inside
/// the iteration once constructed.
struct SolverWorkspace {
  std::vector<double> x_md, q_xmd, aty, x_next, dual_arg, a_arg;
  explicit SolverWorkspace(const QpInstance& inst)
      : x_md(inst.n), q_xmd(inst.n), aty(inst.n), x_next(inst.n), dual_arg(inst.n),
        a_arg(inst.m) {}
};

/// One accelerated primal-dual iteration at inner index k:
///
///   x_md   = (1-beta) x_bar + beta x
///   x_next = proj_[l,u](x - eta (Q x_md + c - A^T y))
///   y_next = proj_dual(y + tau (b - A(theta (x_next - x) + x_next)))
///   x_bar  = (1-beta) x_bar + beta x_next
///
/// Throws DivergedError (carrying k) if non-finite values appear.
void inner_step(SolverState& state, const QpInstance& inst, const StepSchedule& schedule,
                std::size_t k, SolverWorkspace& ws);

/// Restarted accelerated solve. Every restart_len inner steps the iterate is
/// reset to the running average (x_bar, y) and the schedule index returns to
/// zero. Residuals are checked every check_every inner steps (including at
/// step zero, so a warm start that already meets tol returns immediately).
SolveReport solve(const QpInstance& inst, const SolverConfig& cfg);

enum class Metric : std::uint8_t { WallSeconds, Iterations };

/// (base - ours) / base on the selected metric; positive means `ours` is
/// faster. Throws ContractViolation when the base metric is zero.
double improvement_ratio(const SolveReport& base, const SolveReport& ours, Metric metric);

}  // namespace pdqp
