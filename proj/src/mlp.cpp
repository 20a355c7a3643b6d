#include "pdqp/mlp.hpp"

#include "pdqp/errors.hpp"

namespace pdqp {

void mlp_forward_batch(const Mlp& mlp, const double* in, std::size_t batch, double* out,
                       MlpTrace* trace) {
  if (mlp.layers.empty()) throw ContractViolation("mlp: empty network");
  std::vector<double> cur(in, in + batch * mlp.in_dim());
  if (trace) {
    trace->input = cur;
    trace->pre.assign(mlp.layers.size(), {});
  }
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    const DenseLayer& layer = mlp.layers[l];
    std::vector<double> next(batch * layer.out_dim);
    for (std::size_t r = 0; r < batch; ++r) {
      const double* a = cur.data() + r * layer.in_dim;
      double* z = next.data() + r * layer.out_dim;
      for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double acc = layer.bias[o];
        const double* w = layer.weight.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) acc += w[i] * a[i];
        z[o] = acc;
      }
    }
    if (trace) trace->pre[l] = next;
    if (l + 1 < mlp.layers.size())
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    cur = std::move(next);
  }
  std::copy(cur.begin(), cur.end(), out);
}

void mlp_backward_batch(const Mlp& mlp, const MlpTrace& trace, const double* g_out,
                        std::size_t batch, double* g_in, Mlp& grads) {
  const std::size_t nl = mlp.layers.size();
  std::vector<double> g(g_out, g_out + batch * mlp.out_dim());
  for (std::size_t l = nl; l-- > 0;) {
    const DenseLayer& layer = mlp.layers[l];
    DenseLayer& gl = grads.layers[l];
    // Activation feeding this layer: relu(pre[l-1]) or the raw input.
    std::vector<double> act;
    const double* a_ptr;
    if (l == 0) {
      a_ptr = trace.input.data();
    } else {
      act = trace.pre[l - 1];
      for (double& v : act) v = v > 0.0 ? v : 0.0;
      a_ptr = act.data();
    }
    std::vector<double> g_prev(batch * layer.in_dim, 0.0);
    for (std::size_t r = 0; r < batch; ++r) {
      const double* a = a_ptr + r * layer.in_dim;
      const double* gz = g.data() + r * layer.out_dim;
      double* gp = g_prev.data() + r * layer.in_dim;
      for (std::size_t o = 0; o < layer.out_dim; ++o) {
        const double go = gz[o];
        gl.bias[o] += go;
        double* gw = gl.weight.data() + o * layer.in_dim;
        const double* w = layer.weight.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) {
          gw[i] += go * a[i];
          gp[i] += go * w[i];
        }
      }
    }
    if (l == 0) {
      if (g_in) std::copy(g_prev.begin(), g_prev.end(), g_in);
      break;
    }
    // Gate through the ReLU between layer l-1 and l (derivative 0 at 0).
    const std::vector<double>& pre_prev = trace.pre[l - 1];
    for (std::size_t i = 0; i < g_prev.size(); ++i)
      g_prev[i] = pre_prev[i] > 0.0 ? g_prev[i] : 0.0;
    g = std::move(g_prev);
  }
}

Mlp identity_mlp(std::size_t in, std::size_t out, std::size_t hidden, std::size_t depth) {
  if (depth < 1) throw ContractViolation("mlp: depth must be >= 1");
  Mlp m;
  if (depth == 1) {
    DenseLayer l{in, out, std::vector<double>(out * in, 0.0), std::vector<double>(out, 0.0)};
    l.weight[0] = 1.0;  // carries channel 0 to channel 0
    m.layers.push_back(std::move(l));
    return m;
  }
  if (hidden < 2) throw ContractViolation("mlp: depth >= 2 needs hidden >= 2");
  DenseLayer first{in, hidden, std::vector<double>(hidden * in, 0.0),
                   std::vector<double>(hidden, 0.0)};
  first.weight[0 * in + 0] = 1.0;
  first.weight[1 * in + 0] = -1.0;
  m.layers.push_back(std::move(first));
  for (std::size_t l = 2; l < depth; ++l) {
    DenseLayer mid{hidden, hidden, std::vector<double>(hidden * hidden, 0.0),
                   std::vector<double>(hidden, 0.0)};
    mid.weight[0 * hidden + 0] = 1.0;
    mid.weight[1 * hidden + 1] = 1.0;
    m.layers.push_back(std::move(mid));
  }
  DenseLayer last{hidden, out, std::vector<double>(out * hidden, 0.0),
                  std::vector<double>(out, 0.0)};
  last.weight[0 * hidden + 0] = 1.0;
  last.weight[0 * hidden + 1] = -1.0;
  m.layers.push_back(std::move(last));
  return m;
}

Mlp zeros_like(const Mlp& m) {
  Mlp z = m;
  for (DenseLayer& l : z.layers) {
    std::fill(l.weight.begin(), l.weight.end(), 0.0);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  return z;
}

}  // namespace pdqp
