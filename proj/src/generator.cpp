#include "pdqp/generator.hpp"

#include <algorithm>
#include <string>

#include "pdqp/errors.hpp"
#include "pdqp/rng.hpp"

namespace pdqp {

namespace {
constexpr double kDiagFloor = 0.1;
constexpr int kMaxRowRedraws = 1000;
}  // namespace

void GeneratorConfig::validate() const {
  if (density <= 0.0 || density > 1.0)
    throw ContractViolation("generator: density must be in (0, 1]");
  if (feasibility <= 0.0 || feasibility >= 1.0)
    throw ContractViolation("generator: feasibility must be in (0, 1)");
  if (quad_diag.stddev < 0 || linear_cost.stddev < 0 || constraint_coeff.stddev < 0)
    throw ContractViolation("generator: negative stddev");
  if (!(upper_bound > 0.0)) throw ContractViolation("generator: upper_bound must be positive");
}

QpInstance generate_synthetic(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  QpInstance inst;
  inst.n = cfg.n;
  inst.m = cfg.m;
  inst.name = "syn-n" + std::to_string(cfg.n) + "-m" + std::to_string(cfg.m) + "-s" +
              std::to_string(cfg.seed);

  std::vector<double> diag(cfg.n);
  for (double& d : diag)
    d = std::max(kDiagFloor, rng.normal(cfg.quad_diag.mean, cfg.quad_diag.stddev));
  inst.quad = SparseMatrix::diagonal(diag);

  inst.linear.resize(cfg.n);
  for (double& c : inst.linear) c = rng.normal(cfg.linear_cost.mean, cfg.linear_cost.stddev);

  inst.lower.assign(cfg.n, 0.0);
  inst.upper.assign(cfg.n, cfg.upper_bound);

  SparseMatrix a;
  a.nrows = cfg.m;
  a.ncols = cfg.n;
  a.row_offsets.assign(cfg.m + 1, 0);
  inst.rhs.resize(cfg.m);
  std::vector<std::size_t> row_cols;
  std::vector<double> row_vals;
  for (std::size_t i = 0; i < cfg.m; ++i) {
    double row_dot_u = 0.0;
    int attempts = 0;
    do {
      if (++attempts > kMaxRowRedraws)
        throw ContractViolation("generator: could not draw a feasible row " + std::to_string(i));
      row_cols.clear();
      row_vals.clear();
      row_dot_u = 0.0;
      for (std::size_t j = 0; j < cfg.n; ++j) {
        if (rng.uniform01() < cfg.density) {
          const double v = rng.normal(cfg.constraint_coeff.mean, cfg.constraint_coeff.stddev);
          row_cols.push_back(j);
          row_vals.push_back(v);
          row_dot_u += v * cfg.upper_bound;
        }
      }
    } while (row_dot_u < 0.0);  // keeps x = u feasible for this row
    a.col_indices.insert(a.col_indices.end(), row_cols.begin(), row_cols.end());
    a.values.insert(a.values.end(), row_vals.begin(), row_vals.end());
    a.row_offsets[i + 1] = a.values.size();
    inst.rhs[i] = cfg.feasibility * row_dot_u;
  }
  inst.constraints = std::move(a);
  inst.row_kind.assign(cfg.m, RowKind::InequalityGeq);

  inst.finalize();
  return inst;
}

}  // namespace pdqp
