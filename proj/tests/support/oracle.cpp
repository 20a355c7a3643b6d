#include "support/oracle.hpp"

#include <cmath>
#include <limits>

#include "pdqp/sparse.hpp"

namespace pdqp::testing {

namespace {

enum BoundStatus : int { kInterior = 0, kAtLower = 1, kAtUpper = 2 };

double objective_of(const QpInstance& inst, const std::vector<double>& x) {
  const std::vector<double> qx = spmv(inst.quad, x);
  double obj = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) obj += 0.5 * x[i] * qx[i] + inst.linear[i] * x[i];
  return obj;
}

}  // namespace

bool solve_dense_linear(std::vector<double> a, std::vector<double> b, std::size_t dim,
                        std::vector<double>& out) {
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * dim + col]);
    for (std::size_t r = col + 1; r < dim; ++r) {
      const double v = std::abs(a[r * dim + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best < 1e-12) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < dim; ++j) std::swap(a[col * dim + j], a[pivot * dim + j]);
      std::swap(b[col], b[pivot]);
    }
    const double d = a[col * dim + col];
    for (std::size_t r = col + 1; r < dim; ++r) {
      const double f = a[r * dim + col] / d;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < dim; ++j) a[r * dim + j] -= f * a[col * dim + j];
      b[r] -= f * b[col];
    }
  }
  out.assign(dim, 0.0);
  for (std::size_t r = dim; r-- > 0;) {
    double s = b[r];
    for (std::size_t j = r + 1; j < dim; ++j) s -= a[r * dim + j] * out[j];
    out[r] = s / a[r * dim + r];
  }
  return true;
}

std::optional<OracleResult> brute_force_oracle(const QpInstance& inst, double tol) {
  const std::size_t n = inst.n, m = inst.m;
  const std::vector<double> q_dense = inst.quad.to_dense();
  const std::vector<double> a_dense = inst.constraints.to_dense();

  std::vector<std::size_t> ineq_rows, eq_rows;
  for (std::size_t r = 0; r < m; ++r)
    (inst.row_kind[r] == RowKind::Equality ? eq_rows : ineq_rows).push_back(r);

  std::size_t n_bound_combos = 1;
  for (std::size_t i = 0; i < n; ++i) n_bound_combos *= 3;
  const std::size_t n_row_combos = std::size_t{1} << ineq_rows.size();

  std::vector<int> status(n);
  for (std::size_t combo = 0; combo < n_bound_combos; ++combo) {
    std::size_t rem = combo;
    bool feasible_combo = true;
    for (std::size_t i = 0; i < n; ++i) {
      status[i] = static_cast<int>(rem % 3);
      rem /= 3;
      if (status[i] == kAtLower && inst.has_lower[i] == 0.0) feasible_combo = false;
      if (status[i] == kAtUpper && inst.has_upper[i] == 0.0) feasible_combo = false;
    }
    if (!feasible_combo) continue;

    std::vector<std::size_t> free_vars;
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (status[i] == kAtLower) x[i] = inst.lower[i];
      else if (status[i] == kAtUpper) x[i] = inst.upper[i];
      else free_vars.push_back(i);
    }

    for (std::size_t rows = 0; rows < n_row_combos; ++rows) {
      std::vector<std::size_t> active = eq_rows;
      for (std::size_t t = 0; t < ineq_rows.size(); ++t)
        if (rows & (std::size_t{1} << t)) active.push_back(ineq_rows[t]);

      const std::size_t nf = free_vars.size(), na = active.size();
      const std::size_t dim = nf + na;

      // Unknowns: x over the free variables, then multipliers on active rows.
      //   (Qx + c - A^T y)_F = 0,   (A x)_S = b_S
      std::vector<double> sys(dim * dim, 0.0), rhs(dim, 0.0), sol;
      for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t i = free_vars[a];
        for (std::size_t b = 0; b < nf; ++b)
          sys[a * dim + b] = q_dense[i * n + free_vars[b]];
        for (std::size_t s = 0; s < na; ++s)
          sys[a * dim + nf + s] = -a_dense[active[s] * n + i];
        double r = -inst.linear[i];
        for (std::size_t j = 0; j < n; ++j)
          if (status[j] != kInterior) r -= q_dense[i * n + j] * x[j];
        rhs[a] = r;
      }
      for (std::size_t s = 0; s < na; ++s) {
        const std::size_t row = active[s];
        for (std::size_t b = 0; b < nf; ++b)
          sys[(nf + s) * dim + b] = a_dense[row * n + free_vars[b]];
        double r = inst.rhs[row];
        for (std::size_t j = 0; j < n; ++j)
          if (status[j] != kInterior) r -= a_dense[row * n + j] * x[j];
        rhs[nf + s] = r;
      }
      if (dim > 0 && !solve_dense_linear(sys, rhs, dim, sol)) continue;

      std::vector<double> xc = x;
      for (std::size_t a = 0; a < nf; ++a) xc[free_vars[a]] = sol[a];
      std::vector<double> y(m, 0.0);
      bool ok = true;
      for (std::size_t s = 0; s < na; ++s) {
        y[active[s]] = sol[nf + s];
        if (inst.row_kind[active[s]] == RowKind::InequalityGeq && sol[nf + s] < -tol) ok = false;
      }
      if (!ok) continue;

      // Primal feasibility.
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (inst.has_lower[i] != 0.0 && xc[i] < inst.lower[i] - tol) ok = false;
        if (inst.has_upper[i] != 0.0 && xc[i] > inst.upper[i] + tol) ok = false;
      }
      if (!ok) continue;
      const std::vector<double> ax = spmv(inst.constraints, xc);
      for (std::size_t r = 0; r < m && ok; ++r) {
        if (inst.row_kind[r] == RowKind::Equality) {
          if (std::abs(ax[r] - inst.rhs[r]) > tol) ok = false;
        } else if (ax[r] < inst.rhs[r] - tol) {
          ok = false;
        }
      }
      if (!ok) continue;

      // Sign conditions on the implied bound multipliers.
      const std::vector<double> qx = spmv(inst.quad, xc);
      const std::vector<double> aty = spmv_transpose(inst.constraints, y);
      for (std::size_t i = 0; i < n && ok; ++i) {
        const double zeta = qx[i] + inst.linear[i] - aty[i];
        if (status[i] == kInterior && std::abs(zeta) > 1e-7) ok = false;
        if (status[i] == kAtLower && zeta < -tol) ok = false;
        if (status[i] == kAtUpper && zeta > tol) ok = false;
      }
      if (!ok) continue;

      return OracleResult{{xc, y}, objective_of(inst, xc)};
    }
  }
  return std::nullopt;
}

}  // namespace pdqp::testing
