#pragma once

#include <cstdint>

#include "pdqp/loss.hpp"
#include "pdqp/net.hpp"

namespace pdqp {

/// Reverse sweep over a recorded forward pass. `loss_grad` is the gradient of
/// the scalar loss with respect to the network output (the projected
/// readouts). Exact for the recorded graph: projection and ReLU backward use
/// the masks stored at forward time, gradients accumulate across the shared
/// per-node MLPs, and squashing reparameterizations are chained onto the raw
/// step scalars.
GradientSet backward(const QpInstance& inst, const NetParams& params, const ForwardTrace& trace,
                     const PointGradient& loss_grad);

/// Central-finite-difference check of backward() on the unsupervised loss.
/// Samples `samples` parameter coordinates (deterministic per seed), perturbs
/// each by +/- h, and returns the maximum relative discrepancy against the
/// analytic gradient.
double gradcheck(const NetConfig& cfg, const QpInstance& inst, std::uint64_t seed,
                 double h = 1e-5, int samples = 20);

}  // namespace pdqp
