#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

namespace pdqp {

/// Compressed sparse row matrix with 64-bit float values.
///
/// Invariants (checked by validate()):
///   - row_offsets is non-decreasing, has nrows+1 entries, and ends at nnz().
///   - column indices are strictly increasing within each row and < ncols,
///     which also rules out duplicate entries.
struct SparseMatrix {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  void validate() const;

  /// Builds from unordered (row, col, value) triplets; throws ContractViolation
  /// on duplicate coordinates.
  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    std::vector<std::tuple<std::size_t, std::size_t, double>> entries);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(const std::vector<double>& diag);
  /// Dense row-major input; entries equal to 0.0 are dropped.
  static SparseMatrix from_dense(std::size_t nrows, std::size_t ncols, const std::vector<double>& dense);

  /// Explicit transpose (test/reference paths; the solver never materializes it).
  SparseMatrix transposed() const;
  std::vector<double> to_dense() const;

  /// Value at (i, j), 0.0 if not stored. Binary search within the row.
  double at(std::size_t i, std::size_t j) const;

  bool operator==(const SparseMatrix&) const = default;
};

/// out = M v, exact CSR row dots, left-to-right accumulation within a row.
void spmv(const SparseMatrix& m, std::span<const double> v, std::span<double> out);
std::vector<double> spmv(const SparseMatrix& m, const std::vector<double>& v);

/// out = M^T v without materializing the transpose (row-major scatter,
/// deterministic order).
void spmv_transpose(const SparseMatrix& m, std::span<const double> v, std::span<double> out);
std::vector<double> spmv_transpose(const SparseMatrix& m, const std::vector<double>& v);

/// Largest-singular-value estimate via power iteration on M^T M. Returns a
/// lower bound on ||M||_2 (Rayleigh quotient), 0 for an all-zero matrix.
/// Deterministic for a given seed.
double spectral_norm_estimate(const SparseMatrix& m, int iters, std::uint64_t seed);

}  // namespace pdqp
