#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdqp/instance.hpp"
#include "pdqp/mlp.hpp"
#include "pdqp/schedule.hpp"

namespace pdqp {

/// Architecture of the unrolled network: `layers` unrolled iterations,
/// `width` channels per node (primal and dual alike), and the shape of the
/// scalar embedding / readout MLPs.
struct NetConfig {
  std::size_t layers = 8;
  std::size_t width = 16;
  std::size_t mlp_hidden = 16;
  std::size_t mlp_depth = 1;

  void validate() const;
  bool operator==(const NetConfig&) const = default;
};

/// Learnable parameters. Step scalars are stored unconstrained; when
/// `squash_scalars` is set the effective values are
///
///   momentum      = logistic(raw)   in (0, 1)
///   primal_step   = softplus(raw)   > 0
///   dual_step     = softplus(raw)   > 0
///   extrapolation = softplus(raw)   > 0
///
/// Alignment parameters bypass the squashing (raw values are the effective
/// ones) so that momentum = 1 and extrapolation = 0 are representable exactly.
struct NetParams {
  NetConfig config;
  bool squash_scalars = true;

  struct Layer {
    double raw_momentum = 0.0;
    double raw_primal_step = 0.0;
    double raw_dual_step = 0.0;
    double raw_extrapolation = 0.0;
    std::vector<double> w_qx;   ///< width x width, mixes Q X_md
    std::vector<double> w_aty;  ///< width x width, mixes A^T Y
    std::vector<double> w_ax;   ///< width x width, mixes A (extrapolated X)

    bool operator==(const Layer&) const = default;
  };
  std::vector<Layer> layers;

  Mlp embed_x, embed_y;  ///< per-node scalar -> width
  Mlp read_x, read_y;    ///< width -> per-node scalar

  void validate() const;
  StepSizes effective(std::size_t layer) const;

  bool operator==(const NetParams&) const = default;
};

/// Everything the reverse sweep needs: layer inputs, the intermediate
/// products next to each learnable tensor, and the projection pass-through
/// masks (1 = gradient flows, 0 = clamped).
struct ForwardTrace {
  struct Layer {
    std::vector<double> x_in, xbar_in, y_in;  // n*d, n*d, m*d
    std::vector<double> x_out;                // n*d, post-projection
    std::vector<double> q_xmd;                // Q X_md, pre-mix
    std::vector<double> aty;                  // A^T Y, pre-mix
    std::vector<double> grad_x;               // primal update direction
    std::vector<double> a_ext;                // A (theta dX + X+), pre-mix
    std::vector<double> grad_y;               // dual update direction
    std::vector<std::uint8_t> mask_x;         // n*d
    std::vector<std::uint8_t> mask_y;         // m*d
  };
  std::vector<Layer> layers;
  std::vector<double> x_final, y_final;       // embeddings after the last layer
  MlpTrace embed_x_trace, embed_y_trace;      // single shared input (zero)
  MlpTrace read_x_trace, read_y_trace;        // batch over nodes
  std::vector<double> x_readout, y_readout;   // pre-projection readouts
  std::vector<std::uint8_t> mask_x_read, mask_y_read;
  PrimalDualPoint output;
};

/// Runs the unrolled network on an instance. Starts from zero primal/dual
/// vectors, projects every channel through the shared interval / dual-cone
/// kernels, and projects the readout once more so predictions are always
/// bound-feasible. Throws DivergedError (with the layer index) on non-finite
/// activations. Records into *trace when non-null.
PrimalDualPoint forward(const QpInstance& inst, const NetParams& params,
                        ForwardTrace* trace = nullptr);

/// The parameter assignment that reproduces the solver's iterates exactly:
/// width 1, identity mixing matrices, identity embeddings/readouts, raw step
/// scalars equal to schedule_at(k) for k < layers. schedule.restart_len must
/// be >= layers.
NetParams alignment_params(const StepSchedule& schedule, std::size_t layers);

/// Training initialization: mixing matrices = identity + N(0, noise^2), step
/// scalars at the schedule values (through the squashing reparameterization),
/// and embeddings/readouts carrying the identity on channel 0 with N(0,
/// noise^2) on every weight. Deterministic per seed.
NetParams init_params(const NetConfig& cfg, double norm_q, double norm_a, std::uint64_t seed,
                      double noise = 0.01);

/// Shape-congruent zero parameters (gradient accumulators).
NetParams zeros_like(const NetParams& p);

/// Mirror of NetParams used for gradients.
using GradientSet = NetParams;

/// Visits every tensor in a fixed order; f(name, data, count). Scalars are
/// 1-element tensors. The order is the serialization order of checkpoints.
template <class Params, class F>
void for_each_tensor(Params&& p, F&& f) {
  for (std::size_t k = 0; k < p.layers.size(); ++k) {
    auto& layer = p.layers[k];
    const std::string prefix = "layer" + std::to_string(k) + "/";
    f(prefix + "raw_momentum", &layer.raw_momentum, std::size_t{1});
    f(prefix + "raw_primal_step", &layer.raw_primal_step, std::size_t{1});
    f(prefix + "raw_dual_step", &layer.raw_dual_step, std::size_t{1});
    f(prefix + "raw_extrapolation", &layer.raw_extrapolation, std::size_t{1});
    f(prefix + "w_qx", layer.w_qx.data(), layer.w_qx.size());
    f(prefix + "w_aty", layer.w_aty.data(), layer.w_aty.size());
    f(prefix + "w_ax", layer.w_ax.data(), layer.w_ax.size());
  }
  auto visit_mlp = [&f](const std::string& name, auto& mlp) {
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
      f(name + "/" + std::to_string(l) + "/weight", mlp.layers[l].weight.data(),
        mlp.layers[l].weight.size());
      f(name + "/" + std::to_string(l) + "/bias", mlp.layers[l].bias.data(),
        mlp.layers[l].bias.size());
    }
  };
  visit_mlp("embed_x", p.embed_x);
  visit_mlp("embed_y", p.embed_y);
  visit_mlp("read_x", p.read_x);
  visit_mlp("read_y", p.read_y);
}

}  // namespace pdqp
