#include "support/dense_ref.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdqp::testing {

std::vector<double> dense_matvec(const std::vector<double>& a, std::size_t nrows,
                                 std::size_t ncols, const std::vector<double>& v) {
  std::vector<double> out(nrows, 0.0);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out[i] += a[i * ncols + j] * v[j];
  return out;
}

double dense_gap_numerator(const QpInstance& inst, const PrimalDualPoint& p) {
  const std::size_t n = inst.n, m = inst.m;
  const std::vector<double> q = inst.quad.to_dense();
  const std::vector<double> a = inst.constraints.to_dense();
  const std::vector<double> qx = dense_matvec(q, n, n, p.x);

  std::vector<double> aty(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < n; ++j) aty[j] += a[r * n + j] * p.y[r];

  double cx = 0.0, xqx = 0.0, by = 0.0;
  for (std::size_t i = 0; i < n; ++i) cx += inst.linear[i] * p.x[i];
  for (std::size_t i = 0; i < n; ++i) xqx += p.x[i] * qx[i];
  for (std::size_t r = 0; r < m; ++r) by += inst.rhs[r] * p.y[r];

  double rcc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zeta = inst.linear[i] - aty[i] + qx[i];
    double rc = 0.0;
    if (inst.has_lower[i] != 0.0) rc += std::max(zeta, 0.0);
    if (inst.has_upper[i] != 0.0) rc += std::min(zeta, 0.0);
    if (rc > 0.0) rcc += inst.lower[i] * rc;
    if (rc < 0.0) rcc += inst.upper[i] * rc;
  }
  const double primal = cx + 0.5 * xqx;
  const double dual = by - 0.5 * xqx;
  return std::abs(primal - dual - rcc);
}

QpInstance permute_variables(const QpInstance& inst, const std::vector<std::size_t>& perm) {
  const std::size_t n = inst.n;
  // inv[old] = new position
  std::vector<std::size_t> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;

  QpInstance out = inst;
  for (std::size_t i = 0; i < n; ++i) {
    out.linear[i] = inst.linear[perm[i]];
    out.lower[i] = inst.lower[perm[i]];
    out.upper[i] = inst.upper[perm[i]];
  }

  std::vector<std::tuple<std::size_t, std::size_t, double>> q_triplets;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = inst.quad.row_offsets[i]; p < inst.quad.row_offsets[i + 1]; ++p)
      q_triplets.emplace_back(inv[i], inv[inst.quad.col_indices[p]], inst.quad.values[p]);
  out.quad = SparseMatrix::from_triplets(n, n, q_triplets);

  std::vector<std::tuple<std::size_t, std::size_t, double>> a_triplets;
  for (std::size_t r = 0; r < inst.m; ++r)
    for (std::size_t p = inst.constraints.row_offsets[r]; p < inst.constraints.row_offsets[r + 1];
         ++p)
      a_triplets.emplace_back(r, inv[inst.constraints.col_indices[p]],
                              inst.constraints.values[p]);
  out.constraints = SparseMatrix::from_triplets(inst.m, n, a_triplets);

  out.finalize();
  return out;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0.0 || db == 0.0) return 0.0;
  return num / std::sqrt(da * db);
}

double point_distance(const PrimalDualPoint& a, const PrimalDualPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
  for (std::size_t i = 0; i < a.y.size(); ++i) s += (a.y[i] - b.y[i]) * (a.y[i] - b.y[i]);
  return std::sqrt(s);
}

}  // namespace pdqp::testing
