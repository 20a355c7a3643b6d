#pragma once

#include <vector>

#include "pdqp/instance.hpp"

namespace pdqp {

/// Feasibility of the primal point.
struct PrimalResidual {
  std::vector<double> bound_violation;  ///< n: relu(l-x)*has_l + relu(x-u)*has_u
  std::vector<double> row_violation;    ///< m: |Ax-b| on equalities, relu(b-Ax) on inequalities
  double num = 0.0;                     ///< max violation
  double den = 0.0;                     ///< eps + max(|b|_inf, |Ax|_inf)
  double rel = 0.0;
};

/// Stationarity and dual-sign feasibility.
struct DualResidual {
  std::vector<double> reduced_cost;            ///< n: c - A^T y + Q x
  std::vector<double> stationarity_violation;  ///< n: part of the reduced cost no bound dual can absorb
  std::vector<double> dual_sign_violation;     ///< m: relu(-y) on inequality rows
  double num = 0.0;  ///< max violation
  double den = 0.0;  ///< eps + max(|c|_inf, |Qx|_inf, |A^T y|_inf)
  double rel = 0.0;
};

/// Primal-dual gap corrected by the bounds' dual-objective contribution.
struct GapTerms {
  double primal_objective = 0.0;  ///< c.x + x.Qx/2
  double dual_objective = 0.0;    ///< b.y - x.Qx/2
  std::vector<double> bound_duals;  ///< n: relu(rc)*has_l + min(0,rc)*has_u
  double bound_objective = 0.0;     ///< sum l_i*bd_i over bd_i>0 plus u_i*bd_i over bd_i<0
  double num = 0.0;  ///< |P - D - bound_objective|
  double den = 0.0;  ///< eps + max(|P|, |D|)
  double rel = 0.0;
};

/// All three normalized residuals together with their raw components.
struct KktResiduals {
  double rel_primal = 0.0;
  double rel_dual = 0.0;
  double rel_gap = 0.0;

  std::vector<double> bound_violation;
  std::vector<double> row_violation;
  std::vector<double> reduced_cost;
  std::vector<double> stationarity_violation;
  std::vector<double> dual_sign_violation;
  std::vector<double> bound_duals;
  double bound_objective = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double eps = 0.0;

  // Numerators and normalization denominators behind the rel_* values
  // (rel = num / den; the denominators include eps).
  double num_primal = 0.0, den_primal = 0.0;
  double num_dual = 0.0, den_dual = 0.0;
  double num_gap = 0.0, den_gap = 0.0;

  double max_rel() const;
};

inline constexpr double kDefaultResidualEps = 1e-8;

PrimalResidual primal_residual(const QpInstance& inst, const PrimalDualPoint& p,
                               double eps = kDefaultResidualEps);
DualResidual dual_residual(const QpInstance& inst, const PrimalDualPoint& p,
                           double eps = kDefaultResidualEps);
GapTerms gap(const QpInstance& inst, const PrimalDualPoint& p, double eps = kDefaultResidualEps);

KktResiduals full_residuals(const QpInstance& inst, const PrimalDualPoint& p,
                            double eps = kDefaultResidualEps);

/// |P - D - bound_objective|, the gap before normalization.
double unnormalized_gap(const QpInstance& inst, const PrimalDualPoint& p);

}  // namespace pdqp
