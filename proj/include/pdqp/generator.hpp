#pragma once

#include <cstdint>

#include "pdqp/instance.hpp"

namespace pdqp {

struct NormalDist {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Synthetic-family parameters: diagonal positive-definite quadratic, dense
/// normal objective, sparse normal constraint matrix, box [0, upper_bound],
/// and rhs b_i = feasibility * (a_i . u) so that x = u satisfies every row.
struct GeneratorConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  double density = 0.3;               ///< expected fraction of nonzeros per row of A, in (0, 1]
  double feasibility = 0.8;           ///< rhs control factor, in (0, 1)
  NormalDist quad_diag{4.0, 2.0};     ///< diagonal of Q, clamped below at 0.1
  NormalDist linear_cost{3.0, 1.0};   ///< entries of c
  NormalDist constraint_coeff{2.0, 1.0};  ///< nonzero entries of A
  double upper_bound = 10.0;          ///< u for every variable; l is always 0
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministic per seed; two calls with equal configs produce equal
/// instances. Rows whose coefficients would make x = u infeasible
/// (a_i . u < 0) are redrawn.
QpInstance generate_synthetic(const GeneratorConfig& cfg);

}  // namespace pdqp
