#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdqp/sparse.hpp"

namespace pdqp {

enum class RowKind : std::uint8_t { Equality = 0, InequalityGeq = 1 };

/// A convex QP
///
///   minimize    1/2 x^T Q x + c^T x
///   subject to  a_i^T x  =  b_i   (equality rows)
///               a_i^T x >=  b_i   (inequality rows)
///               l <= x <= u       (entries may be -inf / +inf)
///
/// Bounds are stored as IEEE infinities; the 0/1 masks below are derived in
/// finalize() and keep the projection and residual kernels branch-free.
struct QpInstance {
  std::string name;
  std::size_t n = 0;  ///< variables
  std::size_t m = 0;  ///< constraint rows

  SparseMatrix quad;               ///< Q, n x n, structurally symmetric
  std::vector<double> linear;      ///< c
  SparseMatrix constraints;        ///< A, m x n
  std::vector<double> rhs;         ///< b
  std::vector<double> lower;       ///< l
  std::vector<double> upper;       ///< u
  std::vector<RowKind> row_kind;   ///< per-row flag

  // Derived, never set independently.
  std::vector<double> has_lower;      ///< 1 iff lower[i] finite
  std::vector<double> has_upper;      ///< 1 iff upper[i] finite
  std::vector<double> is_inequality;  ///< 1 iff row_kind[i] == InequalityGeq

  /// Recomputes the masks and checks all invariants (sizes, Q symmetry with
  /// equal mirrored values, l <= u where both finite, finite data elsewhere).
  /// Throws ContractViolation.
  void finalize();

  std::size_t nnz() const { return quad.nnz() + constraints.nnz(); }

  bool operator==(const QpInstance&) const = default;
};

/// A primal vector x (length n) and dual vector y (length m).
struct PrimalDualPoint {
  std::vector<double> x;
  std::vector<double> y;

  bool operator==(const PrimalDualPoint&) const = default;
};

}  // namespace pdqp
