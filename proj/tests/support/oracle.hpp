#pragma once

#include <optional>
#include <vector>

#include "pdqp/instance.hpp"

namespace pdqp::testing {

/// Brute-force KKT oracle for tiny instances (n <= ~8, m <= ~6): enumerates
/// every bound-activity pattern and active inequality set, solves the
/// equality-constrained stationarity system densely, and returns the first
/// candidate satisfying feasibility, dual signs, and complementarity. For a
/// convex QP any KKT point is globally optimal, so the scan stops there.
/// Entirely independent of the iterative solver.
struct OracleResult {
  PrimalDualPoint point;
  double objective = 0.0;
};

std::optional<OracleResult> brute_force_oracle(const QpInstance& inst, double tol = 1e-9);

/// Dense partial-pivot LU solve; returns false when the system is singular.
bool solve_dense_linear(std::vector<double> a, std::vector<double> b, std::size_t dim,
                        std::vector<double>& out);

}  // namespace pdqp::testing
