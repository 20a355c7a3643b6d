#include "pdqp/loss.hpp"

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

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Index of the largest |value| over (first; second), ties to the lowest
/// index, first block before second. Returns (block, index, value).
struct ArgMax {
  int block = 0;
  std::size_t index = 0;
  double value = 0.0;
};

ArgMax arg_max_abs(const std::vector<double>& first, const std::vector<double>& second) {
  ArgMax best;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (std::abs(first[i]) > best_abs) {
      best_abs = std::abs(first[i]);
      best = {0, i, first[i]};
    }
  }
  for (std::size_t i = 0; i < second.size(); ++i) {
    if (std::abs(second[i]) > best_abs) {
      best_abs = std::abs(second[i]);
      best = {1, i, second[i]};
    }
  }
  return best;
}

/// Adds w * (row i of Q) into g.
void add_quad_row(const QpInstance& inst, std::size_t i, double w, std::vector<double>& g) {
  const SparseMatrix& q = inst.quad;
  for (std::size_t p = q.row_offsets[i]; p < q.row_offsets[i + 1]; ++p)
    g[q.col_indices[p]] += w * q.values[p];
}

/// Adds w * (row j of A) into g (gradient through a_j . x).
void add_constraint_row(const QpInstance& inst, std::size_t j, double w, std::vector<double>& g) {
  const SparseMatrix& a = inst.constraints;
  for (std::size_t p = a.row_offsets[j]; p < a.row_offsets[j + 1]; ++p)
    g[a.col_indices[p]] += w * a.values[p];
}

/// Adds w * (column i of A) into gy (gradient of zeta_i through y).
void add_constraint_col(const QpInstance& inst, std::size_t i, double w, std::vector<double>& gy) {
  const SparseMatrix& a = inst.constraints;
  for (std::size_t r = 0; r < a.nrows; ++r)
    for (std::size_t p = a.row_offsets[r]; p < a.row_offsets[r + 1]; ++p)
      if (a.col_indices[p] == i) gy[r] += w * a.values[p];
}

}  // namespace

LossValue unsupervised_loss(const QpInstance& inst, const PrimalDualPoint& point, double eps) {
  const KktResiduals r = full_residuals(inst, point, eps);
  LossValue v;
  v.mode = LossMode::Unsupervised;
  v.components = {r.rel_primal, r.rel_dual, r.rel_gap};
  v.total = r.rel_primal + r.rel_dual + r.rel_gap;
  return v;
}

LossDenoms loss_denoms(const QpInstance& inst, const PrimalDualPoint& point, double eps) {
  const KktResiduals r = full_residuals(inst, point, eps);
  return {r.den_primal, r.den_dual, r.den_gap};
}

LossValue unsupervised_loss_frozen(const QpInstance& inst, const PrimalDualPoint& point,
                                   const LossDenoms& denoms, double eps) {
  const KktResiduals r = full_residuals(inst, point, eps);
  LossValue v;
  v.mode = LossMode::Unsupervised;
  v.components = {r.num_primal / denoms.primal, r.num_dual / denoms.dual,
                  r.num_gap / denoms.gap};
  v.total = v.components[0] + v.components[1] + v.components[2];
  return v;
}

LossValue unsupervised_loss_grad(const QpInstance& inst, const PrimalDualPoint& point,
                                 PointGradient& grad, double eps) {
  const KktResiduals res = full_residuals(inst, point, eps);
  grad.x.assign(inst.n, 0.0);
  grad.y.assign(inst.m, 0.0);

  const std::vector<double> ax = spmv(inst.constraints, point.x);
  const std::vector<double> qx = spmv(inst.quad, point.x);
  const std::vector<double> aty = spmv_transpose(inst.constraints, point.y);

  // Primal residual: gradient flows into the single maximizing violation.
  {
    const double den = eps + std::max(max_abs(inst.rhs), max_abs(ax));
    const ArgMax am = arg_max_abs(res.bound_violation, res.row_violation);
    if (am.value != 0.0) {
      if (am.block == 0) {
        const std::size_t i = am.index;
        double d = 0.0;
        if (inst.has_lower[i] != 0.0 && inst.lower[i] - point.x[i] > 0.0) d -= 1.0;
        if (inst.has_upper[i] != 0.0 && point.x[i] - inst.upper[i] > 0.0) d += 1.0;
        grad.x[i] += d / den;
      } else {
        const std::size_t j = am.index;
        if (inst.row_kind[j] == RowKind::Equality) {
          add_constraint_row(inst, j, sign_of(ax[j] - inst.rhs[j]) / den, grad.x);
        } else if (inst.rhs[j] - ax[j] > 0.0) {
          add_constraint_row(inst, j, -1.0 / den, grad.x);
        }
      }
    }
  }

  // Dual residual.
  {
    const double den = eps + std::max({max_abs(inst.linear), max_abs(qx), max_abs(aty)});
    const ArgMax am = arg_max_abs(res.stationarity_violation, res.dual_sign_violation);
    if (am.value != 0.0) {
      if (am.block == 0) {
        const std::size_t i = am.index;
        const double z = res.reduced_cost[i];
        double factor = 1.0;
        if (inst.has_lower[i] != 0.0 && z > 0.0) factor -= 1.0;
        if (inst.has_upper[i] != 0.0 && z < 0.0) factor -= 1.0;
        const double w = sign_of(am.value) * factor / den;
        if (w != 0.0) {
          add_quad_row(inst, i, w, grad.x);       // d zeta_i / dx = Q row i
          add_constraint_col(inst, i, -w, grad.y);  // d zeta_i / dy = -A column i
        }
      } else {
        const std::size_t j = am.index;
        if (point.y[j] < 0.0 && inst.is_inequality[j] != 0.0) grad.y[j] -= 1.0 / den;
      }
    }
  }

  // Gap: numerator |P - D - bound_objective|, dense in x through c + 2 Q x.
  {
    const double den =
        eps + std::max(std::abs(res.primal_objective), std::abs(res.dual_objective));
    const double inner =
        res.primal_objective - res.dual_objective - res.bound_objective;
    const double s = sign_of(inner);
    if (s != 0.0) {
      for (std::size_t t = 0; t < inst.n; ++t)
        grad.x[t] += s * (inst.linear[t] + 2.0 * qx[t]) / den;
      for (std::size_t r = 0; r < inst.m; ++r) grad.y[r] -= s * inst.rhs[r] / den;
      // Bound-objective part: bd_i = relu(z)*has_l + min(0,z)*has_u, weighted
      // by l_i or u_i according to its sign.
      for (std::size_t i = 0; i < inst.n; ++i) {
        const double z = res.reduced_cost[i];
        const double bd = res.bound_duals[i];
        double sel = 0.0;
        if (bd > 0.0) sel = inst.lower[i];
        else if (bd < 0.0) sel = inst.upper[i];
        double gate = 0.0;
        if (inst.has_lower[i] != 0.0 && z > 0.0) gate += 1.0;
        if (inst.has_upper[i] != 0.0 && z < 0.0) gate += 1.0;
        const double w = sel * gate;
        if (w != 0.0) {
          add_quad_row(inst, i, -s * w / den, grad.x);
          add_constraint_col(inst, i, s * w / den, grad.y);
        }
      }
    }
  }

  LossValue v;
  v.mode = LossMode::Unsupervised;
  v.components = {res.rel_primal, res.rel_dual, res.rel_gap};
  v.total = res.rel_primal + res.rel_dual + res.rel_gap;
  return v;
}

LossValue supervised_loss(const QpInstance& inst, const PrimalDualPoint& point,
                          const PrimalDualPoint& oracle) {
  if (point.x.size() != inst.n || oracle.x.size() != inst.n || point.y.size() != inst.m ||
      oracle.y.size() != inst.m)
    throw ContractViolation("supervised_loss: dimension mismatch");
  LossValue v;
  v.mode = LossMode::Supervised;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double d = point.x[i] - oracle.x[i];
    sx += d * d;
  }
  for (std::size_t i = 0; i < inst.m; ++i) {
    const double d = point.y[i] - oracle.y[i];
    sy += d * d;
  }
  const double mse_x = inst.n > 0 ? sx / static_cast<double>(inst.n) : 0.0;
  const double mse_y = inst.m > 0 ? sy / static_cast<double>(inst.m) : 0.0;
  v.components = {mse_x, mse_y, 0.0};
  v.total = mse_x + mse_y;
  return v;
}

LossValue supervised_loss_grad(const QpInstance& inst, const PrimalDualPoint& point,
                               const PrimalDualPoint& oracle, PointGradient& grad) {
  const LossValue v = supervised_loss(inst, point, oracle);
  grad.x.assign(inst.n, 0.0);
  grad.y.assign(inst.m, 0.0);
  for (std::size_t i = 0; i < inst.n; ++i)
    grad.x[i] = 2.0 * (point.x[i] - oracle.x[i]) / static_cast<double>(inst.n);
  for (std::size_t i = 0; i < inst.m; ++i)
    grad.y[i] = 2.0 * (point.y[i] - oracle.y[i]) / static_cast<double>(inst.m);
  return v;
}

}  // namespace pdqp
