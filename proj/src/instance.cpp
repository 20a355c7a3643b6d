#include "pdqp/instance.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pdqp/errors.hpp"

namespace pdqp {

void QpInstance::finalize() {
  quad.validate();
  constraints.validate();
  if (quad.nrows != n || quad.ncols != n)
    throw ContractViolation("instance: Q must be n x n");
  if (constraints.nrows != m || constraints.ncols != n)
    throw ContractViolation("instance: A must be m x n");
  if (linear.size() != n || lower.size() != n || upper.size() != n)
    throw ContractViolation("instance: c/l/u must have length n");
  if (rhs.size() != m || row_kind.size() != m)
    throw ContractViolation("instance: b/row_kind must have length m");

  for (double v : linear)
    if (!std::isfinite(v)) throw ContractViolation("instance: non-finite objective coefficient");
  for (double v : rhs)
    if (!std::isfinite(v)) throw ContractViolation("instance: non-finite rhs");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]))
      throw ContractViolation("instance: NaN bound");
    if (lower[i] == std::numeric_limits<double>::infinity() ||
        upper[i] == -std::numeric_limits<double>::infinity())
      throw ContractViolation("instance: bound with the wrong sign of infinity");
    if (std::isfinite(lower[i]) && std::isfinite(upper[i]) && lower[i] > upper[i])
      throw ContractViolation("instance: lower[" + std::to_string(i) + "] > upper[" +
                              std::to_string(i) + "]");
  }

  // Structural symmetry of Q: every stored (i, j, v) must have a stored
  // mirror (j, i) with the identical value.
  for (std::size_t i = 0; i < quad.nrows; ++i) {
    for (std::size_t p = quad.row_offsets[i]; p < quad.row_offsets[i + 1]; ++p) {
      const std::size_t j = quad.col_indices[p];
      if (quad.at(j, i) != quad.values[p])
        throw ContractViolation("instance: Q not symmetric at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
    }
  }

  has_lower.assign(n, 0.0);
  has_upper.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    has_lower[i] = std::isfinite(lower[i]) ? 1.0 : 0.0;
    has_upper[i] = std::isfinite(upper[i]) ? 1.0 : 0.0;
  }
  is_inequality.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    is_inequality[i] = (row_kind[i] == RowKind::InequalityGeq) ? 1.0 : 0.0;
}

}  // namespace pdqp
