#include "pdqp/gap_bound.hpp"

#include <cmath>
#include <cstdio>

#include "pdqp/errors.hpp"
#include "pdqp/projection.hpp"
#include "pdqp/residuals.hpp"
#include "pdqp/rng.hpp"
#include "pdqp/sparse.hpp"

namespace pdqp {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double bound_objective_at(const QpInstance& inst, const PrimalDualPoint& p) {
  return gap(inst, p).bound_objective;
}

}  // namespace

GapBound gap_upper_bound(const QpInstance& inst, const PrimalDualPoint& point,
                         const PrimalDualPoint& oracle, int norm_iters, std::uint64_t norm_seed) {
  if (point.x.size() != inst.n || oracle.x.size() != inst.n || point.y.size() != inst.m ||
      oracle.y.size() != inst.m)
    throw ContractViolation("gap_upper_bound: dimension mismatch");

  const double norm_q = spectral_norm_estimate(inst.quad, norm_iters, norm_seed);
  const double dx = dist2(point.x, oracle.x);
  const double dy = dist2(point.y, oracle.y);

  GapBound out;
  out.term_quadratic = norm_q * dx * dx;
  out.term_linear_primal = norm2(inst.linear) * dx;
  out.term_dual = norm2(inst.rhs) * dy;
  out.term_r = std::abs(bound_objective_at(inst, point) - bound_objective_at(inst, oracle));
  out.bound = out.term_quadratic + out.term_linear_primal + out.term_dual + out.term_r;
  return out;
}

std::vector<PerturbationSample> perturbation_study(const QpInstance& inst,
                                                   const PrimalDualPoint& oracle,
                                                   std::size_t num_points, double max_radius,
                                                   std::uint64_t seed) {
  if (!(max_radius > 0.0)) throw ContractViolation("perturbation_study: max_radius must be > 0");
  Rng rng(seed);
  std::vector<PerturbationSample> out;
  out.reserve(num_points);

  const double decades = 4.0;
  for (std::size_t s = 0; s < num_points; ++s) {
    // Radii log-spaced over (max_radius * 10^-4, max_radius].
    const double frac = num_points > 1 ? static_cast<double>(s) / (num_points - 1) : 1.0;
    const double radius = max_radius * std::pow(10.0, -decades * (1.0 - frac));

    std::vector<double> dir(inst.n + inst.m);
    double nd = 0.0;
    for (double& e : dir) {
      e = rng.normal();
      nd += e * e;
    }
    nd = std::sqrt(nd);
    if (nd == 0.0) nd = 1.0;

    PrimalDualPoint z = oracle;
    for (std::size_t i = 0; i < inst.n; ++i) z.x[i] += radius * dir[i] / nd;
    for (std::size_t i = 0; i < inst.m; ++i) z.y[i] += radius * dir[inst.n + i] / nd;
    project_primal_inplace(z.x, inst);
    project_dual_inplace(z.y, inst);

    PerturbationSample sample;
    const double dxy = dist2(z.x, oracle.x);
    const double dyy = dist2(z.y, oracle.y);
    sample.distance = std::sqrt(dxy * dxy + dyy * dyy);
    sample.gap = unnormalized_gap(inst, z);
    out.push_back(sample);
  }
  return out;
}

std::string perturbation_csv(const std::vector<PerturbationSample>& samples) {
  std::string out = "distance,gap\n";
  char buf[96];
  for (const PerturbationSample& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s.distance, s.gap);
    out += buf;
  }
  return out;
}

}  // namespace pdqp
