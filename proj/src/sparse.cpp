#include "pdqp/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdqp/errors.hpp"
#include "pdqp/rng.hpp"

namespace pdqp {

void SparseMatrix::validate() const {
  if (row_offsets.size() != nrows + 1)
    throw ContractViolation("sparse: row_offsets must have nrows+1 entries");
  if (row_offsets.front() != 0)
    throw ContractViolation("sparse: row_offsets must start at 0");
  if (row_offsets.back() != values.size())
    throw ContractViolation("sparse: row_offsets must end at nnz");
  if (col_indices.size() != values.size())
    throw ContractViolation("sparse: col_indices/values length mismatch");
  for (std::size_t i = 0; i < nrows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1])
      throw ContractViolation("sparse: row_offsets must be non-decreasing");
    for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      if (col_indices[p] >= ncols)
        throw ContractViolation("sparse: column index out of range");
      if (p > row_offsets[i] && col_indices[p] <= col_indices[p - 1])
        throw ContractViolation("sparse: columns within a row must be strictly increasing");
    }
  }
  for (double v : values)
    if (!std::isfinite(v)) throw ContractViolation("sparse: non-finite value");
}

SparseMatrix SparseMatrix::from_triplets(
    std::size_t nrows, std::size_t ncols,
    std::vector<std::tuple<std::size_t, std::size_t, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b)
                                            : std::get<1>(a) < std::get<1>(b);
  });
  SparseMatrix m;
  m.nrows = nrows;
  m.ncols = ncols;
  m.row_offsets.assign(nrows + 1, 0);
  m.col_indices.reserve(entries.size());
  m.values.reserve(entries.size());
  for (std::size_t t = 0; t < entries.size(); ++t) {
    const auto& [i, j, v] = entries[t];
    if (i >= nrows || j >= ncols) throw ContractViolation("sparse: triplet out of range");
    if (t > 0 && i == std::get<0>(entries[t - 1]) && j == std::get<1>(entries[t - 1]))
      throw ContractViolation("sparse: duplicate triplet at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
    m.col_indices.push_back(j);
    m.values.push_back(v);
    m.row_offsets[i + 1]++;
  }
  for (std::size_t i = 0; i < nrows; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<double> diag(n, 1.0);
  return diagonal(diag);
}

SparseMatrix SparseMatrix::diagonal(const std::vector<double>& diag) {
  SparseMatrix m;
  m.nrows = m.ncols = diag.size();
  m.row_offsets.resize(diag.size() + 1);
  for (std::size_t i = 0; i < diag.size(); ++i) {
    m.row_offsets[i + 1] = i + 1;
    m.col_indices.push_back(i);
    m.values.push_back(diag[i]);
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(std::size_t nrows, std::size_t ncols,
                                      const std::vector<double>& dense) {
  if (dense.size() != nrows * ncols) throw ContractViolation("sparse: dense size mismatch");
  SparseMatrix m;
  m.nrows = nrows;
  m.ncols = ncols;
  m.row_offsets.assign(nrows + 1, 0);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) {
      const double v = dense[i * ncols + j];
      if (v != 0.0) {
        m.col_indices.push_back(j);
        m.values.push_back(v);
      }
    }
    m.row_offsets[i + 1] = m.values.size();
  }
  return m;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t;
  t.nrows = ncols;
  t.ncols = nrows;
  t.row_offsets.assign(ncols + 1, 0);
  for (std::size_t c : col_indices) t.row_offsets[c + 1]++;
  for (std::size_t j = 0; j < ncols; ++j) t.row_offsets[j + 1] += t.row_offsets[j];
  t.col_indices.resize(nnz());
  t.values.resize(nnz());
  std::vector<std::size_t> fill(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      const std::size_t q = fill[col_indices[p]]++;
      t.col_indices[q] = i;
      t.values[q] = values[p];
    }
  }
  return t;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(nrows * ncols, 0.0);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p)
      d[i * ncols + col_indices[p]] = values[p];
  return d;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
  const auto end = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values[static_cast<std::size_t>(it - col_indices.begin())];
}

void spmv(const SparseMatrix& m, std::span<const double> v, std::span<double> out) {
  if (v.size() != m.ncols || out.size() != m.nrows)
    throw ContractViolation("spmv: dimension mismatch");
  for (std::size_t i = 0; i < m.nrows; ++i) {
    double acc = 0.0;
    for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p)
      acc += m.values[p] * v[m.col_indices[p]];
    out[i] = acc;
  }
}

std::vector<double> spmv(const SparseMatrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.nrows);
  spmv(m, std::span<const double>(v), std::span<double>(out));
  return out;
}

void spmv_transpose(const SparseMatrix& m, std::span<const double> v, std::span<double> out) {
  if (v.size() != m.nrows || out.size() != m.ncols)
    throw ContractViolation("spmv_transpose: dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < m.nrows; ++i) {
    const double vi = v[i];
    for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p)
      out[m.col_indices[p]] += m.values[p] * vi;
  }
}

std::vector<double> spmv_transpose(const SparseMatrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.ncols);
  spmv_transpose(m, std::span<const double>(v), std::span<double>(out));
  return out;
}

double spectral_norm_estimate(const SparseMatrix& m, int iters, std::uint64_t seed) {
  if (iters < 1) throw ContractViolation("spectral_norm_estimate: iters must be >= 1");
  if (m.nnz() == 0 || m.nrows == 0 || m.ncols == 0) return 0.0;

  Rng rng(seed);
  std::vector<double> v(m.ncols);
  for (double& e : v) e = rng.normal();
  double nv = 0.0;
  for (double e : v) nv += e * e;
  nv = std::sqrt(nv);
  if (nv == 0.0) return 0.0;
  for (double& e : v) e /= nv;

  std::vector<double> w(m.nrows), z(m.ncols);
  for (int it = 0; it < iters; ++it) {
    spmv(m, v, std::span<double>(w));
    spmv_transpose(m, w, std::span<double>(z));
    double nz = 0.0;
    for (double e : z) nz += e * e;
    nz = std::sqrt(nz);
    if (nz == 0.0) return 0.0;  // v landed in the null space
    for (std::size_t i = 0; i < z.size(); ++i) v[i] = z[i] / nz;
  }
  // Rayleigh estimate sqrt(v^T M^T M v) = ||M v||, never above ||M||_2.
  spmv(m, v, std::span<double>(w));
  double s = 0.0;
  for (double e : w) s += e * e;
  return std::sqrt(s);
}

}  // namespace pdqp
