#pragma once

#include <cstdint>
#include <vector>

#include "pdqp/instance.hpp"

namespace pdqp::testing {

/// Dense reference kernels, written independently of the CSR paths so the
/// property tests have a second route.
std::vector<double> dense_matvec(const std::vector<double>& a, std::size_t nrows,
                                 std::size_t ncols, const std::vector<double>& v);

/// |P - D - RCC| recomputed densely.
double dense_gap_numerator(const QpInstance& inst, const PrimalDualPoint& p);

/// Applies a variable permutation: x_new[i] = x_old[perm[i]] and the
/// corresponding reshuffle of Q, c, l, u and the columns of A.
QpInstance permute_variables(const QpInstance& inst, const std::vector<std::size_t>& perm);

/// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// l2 distance between two primal-dual points (concatenated).
double point_distance(const PrimalDualPoint& a, const PrimalDualPoint& b);

}  // namespace pdqp::testing
