#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdqp/instance.hpp"

namespace pdqp {

/// Upper bound on the unnormalized primal-dual gap at a point z0 in terms of
/// its distance to an optimum z*:
///
///   gap(z0) <= |Q| |x0-x*|^2 + |c| |x0-x*| + |b| |y0-y*| + R
///
/// with R the change of the bounds' dual-objective contribution between the
/// two points. Distances and norms of c, b are Euclidean; |Q| is the spectral
/// estimate.
struct GapBound {
  double term_quadratic = 0.0;
  double term_linear_primal = 0.0;
  double term_dual = 0.0;
  double term_r = 0.0;
  double bound = 0.0;  ///< sum of the four terms
};

GapBound gap_upper_bound(const QpInstance& inst, const PrimalDualPoint& point,
                         const PrimalDualPoint& oracle, int norm_iters = 100,
                         std::uint64_t norm_seed = 20240601);

/// One perturbed point: its l2 distance to the optimum and its unnormalized
/// gap.
struct PerturbationSample {
  double distance = 0.0;
  double gap = 0.0;
};

/// Samples Gaussian perturbations of the optimum at radii log-spaced over four
/// decades up to max_radius, projects them onto the bounds and dual cone, and
/// records (distance, gap). Deterministic per seed.
std::vector<PerturbationSample> perturbation_study(const QpInstance& inst,
                                                   const PrimalDualPoint& oracle,
                                                   std::size_t num_points, double max_radius,
                                                   std::uint64_t seed);

/// CSV with header "distance,gap" and 17-significant-digit floats.
std::string perturbation_csv(const std::vector<PerturbationSample>& samples);

}  // namespace pdqp
