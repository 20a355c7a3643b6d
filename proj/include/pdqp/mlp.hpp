#pragma once

#include <cstddef>
#include <vector>

namespace pdqp {

/// Dense layer, weight is out_dim x in_dim row-major.
struct DenseLayer {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  bool operator==(const DenseLayer&) const = default;
};

/// Plain MLP with ReLU between layers and no activation after the last one.
struct Mlp {
  std::vector<DenseLayer> layers;

  std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
  std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }

  bool operator==(const Mlp&) const = default;
};

/// Pre-activations recorded for the backward pass; `input` is the batch of
/// inputs (batch x in_dim), `pre[l]` is batch x out_dim of layer l.
struct MlpTrace {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;
};

/// out must hold batch * out_dim. If trace is non-null it is overwritten.
void mlp_forward_batch(const Mlp& mlp, const double* in, std::size_t batch, double* out,
                       MlpTrace* trace);

/// Accumulates parameter gradients into `grads` (shape-congruent with `mlp`)
/// and, when g_in is non-null, writes gradients w.r.t. the inputs
/// (batch x in_dim). ReLU uses derivative 0 at the kink.
void mlp_backward_batch(const Mlp& mlp, const MlpTrace& trace, const double* g_out,
                        std::size_t batch, double* g_in, Mlp& grads);

/// An MLP computing the exact identity on the first channel: a single linear
/// layer when depth == 1, otherwise a ReLU pair (relu(t) - relu(-t) = t)
/// carried through `depth` layers of width `hidden`. Input dim is `in`,
/// output dim `out`; for in > 1 channel 0 is carried, for out > 1 channel 0
/// receives the value and the rest are zero.
Mlp identity_mlp(std::size_t in, std::size_t out, std::size_t hidden, std::size_t depth);

Mlp zeros_like(const Mlp& m);

}  // namespace pdqp
