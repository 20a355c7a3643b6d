#include "pdqp/solver.hpp"

#include <chrono>
#include <cmath>
#include <span>

#include "pdqp/errors.hpp"
#include "pdqp/projection.hpp"
#include "pdqp/sparse.hpp"

namespace pdqp {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

}  // namespace

void inner_step(SolverState& state, const QpInstance& inst, const StepSchedule& schedule,
                std::size_t k, SolverWorkspace& ws) {
  if (state.x.size() != inst.n || state.x_bar.size() != inst.n || state.y.size() != inst.m)
    throw ContractViolation("inner_step: state dimension mismatch");
  const StepSizes s = schedule_at(schedule, k);

  for (std::size_t i = 0; i < inst.n; ++i)
    ws.x_md[i] = (1.0 - s.momentum) * state.x_bar[i] + s.momentum * state.x[i];

  spmv(inst.quad, ws.x_md, std::span<double>(ws.q_xmd));
  spmv_transpose(inst.constraints, state.y, std::span<double>(ws.aty));
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double g = (ws.q_xmd[i] + inst.linear[i]) - ws.aty[i];
    ws.x_next[i] = project_interval(state.x[i] - s.primal_step * g, inst.lower[i], inst.upper[i],
                                    inst.has_lower[i], inst.has_upper[i]);
  }

  for (std::size_t i = 0; i < inst.n; ++i)
    ws.dual_arg[i] = s.extrapolation * (ws.x_next[i] - state.x[i]) + ws.x_next[i];
  spmv(inst.constraints, ws.dual_arg, std::span<double>(ws.a_arg));
  for (std::size_t i = 0; i < inst.m; ++i) {
    const double pre = state.y[i] + s.dual_step * (inst.rhs[i] - ws.a_arg[i]);
    state.y[i] = project_dual_elem(pre, inst.is_inequality[i]);
  }

  for (std::size_t i = 0; i < inst.n; ++i) {
    state.x_bar[i] = (1.0 - s.momentum) * state.x_bar[i] + s.momentum * ws.x_next[i];
    state.x[i] = ws.x_next[i];
  }
  state.inner_k = k + 1;

  if (!all_finite(state.x) || !all_finite(state.y))
    throw DivergedError("solver diverged", k);
}

SolveReport solve(const QpInstance& inst, const SolverConfig& cfg) {
  if (cfg.tol <= 0.0) throw ContractViolation("solve: tol must be positive");
  if (cfg.max_outer < 1) throw ContractViolation("solve: max_outer must be >= 1");
  if (cfg.check_every < 1) throw ContractViolation("solve: check_every must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  const double norm_q = spectral_norm_estimate(inst.quad, cfg.norm_iters, cfg.norm_seed);
  double norm_a = spectral_norm_estimate(inst.constraints, cfg.norm_iters, cfg.norm_seed + 1);
  if (norm_a <= 0.0) norm_a = 1.0;  // zero/empty A: the dual step is inert, any scale works

  StepSchedule schedule;
  schedule.norm_q = norm_q;
  schedule.norm_a = norm_a;
  schedule.restart_len =
      cfg.restart_len > 0
          ? cfg.restart_len
          : static_cast<std::size_t>(std::ceil(64.0 * std::max(norm_q, norm_a) / norm_a));

  SolverState state;
  if (cfg.warm_start) {
    if (cfg.warm_start->x.size() != inst.n || cfg.warm_start->y.size() != inst.m)
      throw ContractViolation("solve: warm start dimension mismatch");
    state.x = project_primal(cfg.warm_start->x, inst);
    state.y = project_dual(cfg.warm_start->y, inst);
  } else {
    state.x.assign(inst.n, 0.0);
    state.y.assign(inst.m, 0.0);
  }
  state.x_bar = state.x;

  SolveReport report;
  if (cfg.record_restarts) report.restart_points.push_back({state.x, state.y});

  SolverWorkspace ws(inst);
  std::size_t iter = 0;
  bool converged = false;
  for (std::size_t outer = 0; outer < cfg.max_outer && !converged; ++outer) {
    for (std::size_t k = 0; k < schedule.restart_len; ++k) {
      if (iter % cfg.check_every == 0) {
        report.final_residuals =
            full_residuals(inst, {state.x, state.y}, cfg.eps_normalization);
        if (report.final_residuals.max_rel() <= cfg.tol) {
          converged = true;
          break;
        }
      }
      inner_step(state, inst, schedule, k, ws);
      ++iter;
    }
    if (converged) break;
    // Restart from the averaged primal iterate and the last dual iterate.
    state.x = state.x_bar;
    state.outer_n = ++report.outer_restarts;
    if (cfg.record_restarts) report.restart_points.push_back({state.x, state.y});
  }

  if (!converged) {
    report.final_residuals = full_residuals(inst, {state.x, state.y}, cfg.eps_normalization);
    converged = report.final_residuals.max_rel() <= cfg.tol;
  }

  report.point = {state.x, state.y};
  report.iterations = iter;
  report.termination = converged ? Termination::Converged : Termination::MaxIter;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

double improvement_ratio(const SolveReport& base, const SolveReport& ours, Metric metric) {
  const double b = metric == Metric::WallSeconds ? base.wall_seconds
                                                 : static_cast<double>(base.iterations);
  const double o = metric == Metric::WallSeconds ? ours.wall_seconds
                                                 : static_cast<double>(ours.iterations);
  if (b == 0.0) throw ContractViolation("improvement_ratio: base metric is zero");
  return (b - o) / b;
}

}  // namespace pdqp
