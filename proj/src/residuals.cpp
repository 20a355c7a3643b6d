#include "pdqp/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "pdqp/errors.hpp"
#include "pdqp/projection.hpp"
#include "pdqp/sparse.hpp"

namespace pdqp {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

void check_dims(const QpInstance& inst, const PrimalDualPoint& p) {
  if (p.x.size() != inst.n || p.y.size() != inst.m)
    throw ContractViolation("residuals: point dimension mismatch");
}

}  // namespace

double KktResiduals::max_rel() const { return std::max({rel_primal, rel_dual, rel_gap}); }

PrimalResidual primal_residual(const QpInstance& inst, const PrimalDualPoint& p, double eps) {
  check_dims(inst, p);
  PrimalResidual out;
  out.bound_violation.resize(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i)
    out.bound_violation[i] = relu(inst.lower[i] - p.x[i]) * inst.has_lower[i] +
                             relu(p.x[i] - inst.upper[i]) * inst.has_upper[i];

  const std::vector<double> ax = spmv(inst.constraints, p.x);
  out.row_violation.resize(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i) {
    const double r = ax[i] - inst.rhs[i];
    out.row_violation[i] =
        inst.row_kind[i] == RowKind::Equality ? std::abs(r) : relu(inst.rhs[i] - ax[i]);
  }

  out.num = std::max(max_abs(out.bound_violation), max_abs(out.row_violation));
  out.den = eps + std::max(max_abs(inst.rhs), max_abs(ax));
  out.rel = out.num / out.den;
  return out;
}

DualResidual dual_residual(const QpInstance& inst, const PrimalDualPoint& p, double eps) {
  check_dims(inst, p);
  DualResidual out;
  const std::vector<double> qx = spmv(inst.quad, p.x);
  const std::vector<double> aty = spmv_transpose(inst.constraints, p.y);
  out.reduced_cost.resize(inst.n);
  out.stationarity_violation.resize(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double z = inst.linear[i] - aty[i] + qx[i];
    out.reduced_cost[i] = z;
    out.stationarity_violation[i] =
        z - relu(z) * inst.has_lower[i] - std::min(0.0, z) * inst.has_upper[i];
  }
  out.dual_sign_violation.resize(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i)
    out.dual_sign_violation[i] = relu(-p.y[i]) * inst.is_inequality[i];

  out.num = std::max(max_abs(out.stationarity_violation), max_abs(out.dual_sign_violation));
  out.den = eps + std::max({max_abs(inst.linear), max_abs(qx), max_abs(aty)});
  out.rel = out.num / out.den;
  return out;
}

GapTerms gap(const QpInstance& inst, const PrimalDualPoint& p, double eps) {
  check_dims(inst, p);
  GapTerms out;
  const std::vector<double> qx = spmv(inst.quad, p.x);
  const std::vector<double> aty = spmv_transpose(inst.constraints, p.y);

  double cx = 0.0, xqx = 0.0, by = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) cx += inst.linear[i] * p.x[i];
  for (std::size_t i = 0; i < inst.n; ++i) xqx += p.x[i] * qx[i];
  for (std::size_t i = 0; i < inst.m; ++i) by += inst.rhs[i] * p.y[i];
  out.primal_objective = cx + 0.5 * xqx;
  out.dual_objective = by - 0.5 * xqx;

  out.bound_duals.resize(inst.n);
  out.bound_objective = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double z = inst.linear[i] - aty[i] + qx[i];
    const double rc = relu(z) * inst.has_lower[i] + std::min(0.0, z) * inst.has_upper[i];
    out.bound_duals[i] = rc;
    // rc > 0 implies a finite lower bound, rc < 0 a finite upper bound.
    if (rc > 0.0) out.bound_objective += inst.lower[i] * rc;
    else if (rc < 0.0) out.bound_objective += inst.upper[i] * rc;
  }

  out.num = std::abs(out.primal_objective - out.dual_objective - out.bound_objective);
  out.den = eps + std::max(std::abs(out.primal_objective), std::abs(out.dual_objective));
  out.rel = out.num / out.den;
  return out;
}

KktResiduals full_residuals(const QpInstance& inst, const PrimalDualPoint& p, double eps) {
  PrimalResidual pr = primal_residual(inst, p, eps);
  DualResidual dr = dual_residual(inst, p, eps);
  GapTerms g = gap(inst, p, eps);

  KktResiduals out;
  out.rel_primal = pr.rel;
  out.rel_dual = dr.rel;
  out.rel_gap = g.rel;
  out.bound_violation = std::move(pr.bound_violation);
  out.row_violation = std::move(pr.row_violation);
  out.reduced_cost = std::move(dr.reduced_cost);
  out.stationarity_violation = std::move(dr.stationarity_violation);
  out.dual_sign_violation = std::move(dr.dual_sign_violation);
  out.bound_duals = std::move(g.bound_duals);
  out.bound_objective = g.bound_objective;
  out.primal_objective = g.primal_objective;
  out.dual_objective = g.dual_objective;
  out.eps = eps;
  out.num_primal = pr.num;
  out.den_primal = pr.den;
  out.num_dual = dr.num;
  out.den_dual = dr.den;
  out.num_gap = g.num;
  out.den_gap = g.den;
  return out;
}

double unnormalized_gap(const QpInstance& inst, const PrimalDualPoint& p) {
  const GapTerms g = gap(inst, p);
  return std::abs(g.primal_objective - g.dual_objective - g.bound_objective);
}

}  // namespace pdqp
