#include "pdqp/projection.hpp"

#include "pdqp/errors.hpp"

namespace pdqp {

void project_primal_inplace(std::span<double> x, const QpInstance& inst) {
  if (x.size() != inst.n) throw ContractViolation("project_primal: dimension mismatch");
  for (std::size_t i = 0; i < inst.n; ++i)
    x[i] = project_interval(x[i], inst.lower[i], inst.upper[i], inst.has_lower[i],
                            inst.has_upper[i]);
}

std::vector<double> project_primal(const std::vector<double>& x, const QpInstance& inst) {
  std::vector<double> out = x;
  project_primal_inplace(out, inst);
  return out;
}

void project_dual_inplace(std::span<double> y, const QpInstance& inst) {
  if (y.size() != inst.m) throw ContractViolation("project_dual: dimension mismatch");
  for (std::size_t i = 0; i < inst.m; ++i) y[i] = project_dual_elem(y[i], inst.is_inequality[i]);
}

std::vector<double> project_dual(const std::vector<double>& y, const QpInstance& inst) {
  std::vector<double> out = y;
  project_dual_inplace(out, inst);
  return out;
}

}  // namespace pdqp
