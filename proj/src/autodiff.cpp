#include "pdqp/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "pdqp/errors.hpp"
#include "pdqp/rng.hpp"
#include "pdqp/sparse.hpp"

namespace pdqp {

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// dB += dC * W^T for C = B * W (B rows x d, W d x d).
void mix_backward_input(const std::vector<double>& g_c, std::size_t rows,
                        const std::vector<double>& w, std::size_t d, std::vector<double>& g_b) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* gc = g_c.data() + r * d;
    double* gb = g_b.data() + r * d;
    for (std::size_t e = 0; e < d; ++e) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += gc[j] * w[e * d + j];
      gb[e] += acc;
    }
  }
}

// dW += B^T * dC.
void mix_backward_weight(const std::vector<double>& b, const std::vector<double>& g_c,
                         std::size_t rows, std::size_t d, std::vector<double>& g_w) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* br = b.data() + r * d;
    const double* gc = g_c.data() + r * d;
    for (std::size_t e = 0; e < d; ++e)
      for (std::size_t j = 0; j < d; ++j) g_w[e * d + j] += br[e] * gc[j];
  }
}

// Adjoint of C = M * B is dB = M^T * dC; of C = M^T * B it is dB = M * dC.
void spmm_adjoint_of_forward(const SparseMatrix& m, const std::vector<double>& g_c,
                             std::vector<double>& g_b, std::size_t d) {
  // g_b += M^T g_c
  for (std::size_t i = 0; i < m.nrows; ++i) {
    const double* gc = g_c.data() + i * d;
    for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p) {
      double* gb = g_b.data() + m.col_indices[p] * d;
      const double v = m.values[p];
      for (std::size_t ch = 0; ch < d; ++ch) gb[ch] += v * gc[ch];
    }
  }
}

void spmm_adjoint_of_transpose(const SparseMatrix& m, const std::vector<double>& g_c,
                               std::vector<double>& g_b, std::size_t d) {
  // g_b += M g_c, for C = M^T B
  for (std::size_t i = 0; i < m.nrows; ++i) {
    double* gb = g_b.data() + i * d;
    for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p) {
      const double* gc = g_c.data() + m.col_indices[p] * d;
      const double v = m.values[p];
      for (std::size_t ch = 0; ch < d; ++ch) gb[ch] += v * gc[ch];
    }
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GradientSet backward(const QpInstance& inst, const NetParams& params, const ForwardTrace& trace,
                     const PointGradient& loss_grad) {
  params.validate();
  if (loss_grad.x.size() != inst.n || loss_grad.y.size() != inst.m)
    throw ContractViolation("backward: loss gradient dimension mismatch");
  if (trace.layers.size() != params.config.layers)
    throw ContractViolation("backward: trace does not match the network depth");

  const std::size_t n = inst.n, m = inst.m, d = params.config.width;
  GradientSet grads = zeros_like(params);

  // Through the final projection of the readouts.
  std::vector<double> g_read_x(n), g_read_y(m);
  for (std::size_t i = 0; i < n; ++i)
    g_read_x[i] = trace.mask_x_read[i] ? loss_grad.x[i] : 0.0;
  for (std::size_t i = 0; i < m; ++i)
    g_read_y[i] = trace.mask_y_read[i] ? loss_grad.y[i] : 0.0;

  // Readout MLPs (batched over nodes); g_x/g_y become gradients w.r.t. the
  // final embeddings.
  std::vector<double> g_x(n * d, 0.0), g_y(m * d, 0.0);
  if (n > 0)
    mlp_backward_batch(params.read_x, trace.read_x_trace, g_read_x.data(), n, g_x.data(),
                       grads.read_x);
  if (m > 0)
    mlp_backward_batch(params.read_y, trace.read_y_trace, g_read_y.data(), m, g_y.data(),
                       grads.read_y);

  std::vector<double> g_xbar(n * d, 0.0);

  std::vector<double> g_xout(n * d), g_ypre(m * d), g_m6(m * d), g_m5(m * d), g_ext(n * d),
      g_xpre(n * d), g_g(n * d), g_m2(n * d), g_m4(n * d), g_m1(n * d), g_m3(n * d),
      g_xmd(n * d), delta(n * d);

  for (std::size_t k = params.config.layers; k-- > 0;) {
    const ForwardTrace::Layer& tl = trace.layers[k];
    const NetParams::Layer& lp = params.layers[k];
    NetParams::Layer& gl = grads.layers[k];
    const StepSizes s = params.effective(k);

    double d_momentum = 0.0, d_primal = 0.0, d_dual = 0.0, d_extrapolation = 0.0;

    // x_bar_out = (1-mom) x_bar_in + mom x_out
    for (std::size_t i = 0; i < n * d; ++i) {
      d_momentum += (tl.x_out[i] - tl.xbar_in[i]) * g_xbar[i];
      g_xout[i] = g_x[i] + s.momentum * g_xbar[i];
      g_xbar[i] *= (1.0 - s.momentum);
    }

    // y_out = proj(y_in + tau * grad_y), grad_y = b 1^T - (A ext) W_ax
    for (std::size_t i = 0; i < m * d; ++i)
      g_ypre[i] = tl.mask_y[i] ? g_y[i] : 0.0;
    d_dual = dot(tl.grad_y, g_ypre);
    for (std::size_t i = 0; i < m * d; ++i) {
      g_m6[i] = -s.dual_step * g_ypre[i];
      g_y[i] = g_ypre[i];  // from the additive y_in term
    }
    mix_backward_weight(tl.a_ext, g_m6, m, d, gl.w_ax);
    std::fill(g_m5.begin(), g_m5.end(), 0.0);
    mix_backward_input(g_m6, m, lp.w_ax, d, g_m5);
    std::fill(g_ext.begin(), g_ext.end(), 0.0);
    spmm_adjoint_of_forward(inst.constraints, g_m5, g_ext, d);

    // ext = theta (x_out - x_in) + x_out
    for (std::size_t i = 0; i < n * d; ++i) delta[i] = tl.x_out[i] - tl.x_in[i];
    d_extrapolation = dot(delta, g_ext);
    std::vector<double> g_xin(n * d, 0.0);
    for (std::size_t i = 0; i < n * d; ++i) {
      g_xout[i] += (1.0 + s.extrapolation) * g_ext[i];
      g_xin[i] -= s.extrapolation * g_ext[i];
    }

    // x_out = proj(x_in - eta * grad_x), grad_x = (Q x_md) W_qx + c 1^T - (A^T y) W_aty
    for (std::size_t i = 0; i < n * d; ++i)
      g_xpre[i] = tl.mask_x[i] ? g_xout[i] : 0.0;
    d_primal = -dot(tl.grad_x, g_xpre);
    for (std::size_t i = 0; i < n * d; ++i) {
      g_xin[i] += g_xpre[i];
      g_g[i] = -s.primal_step * g_xpre[i];
    }
    mix_backward_weight(tl.q_xmd, g_g, n, d, gl.w_qx);
    std::fill(g_m1.begin(), g_m1.end(), 0.0);
    mix_backward_input(g_g, n, lp.w_qx, d, g_m1);
    for (std::size_t i = 0; i < n * d; ++i) g_m4[i] = -g_g[i];
    mix_backward_weight(tl.aty, g_m4, n, d, gl.w_aty);
    std::fill(g_m3.begin(), g_m3.end(), 0.0);
    mix_backward_input(g_m4, n, lp.w_aty, d, g_m3);
    // M3 = A^T y  =>  g_y += A * g_m3
    spmm_adjoint_of_transpose(inst.constraints, g_m3, g_y, d);
    // M1 = Q x_md  =>  g_xmd = Q^T g_m1 (Q symmetric, true adjoint used)
    std::fill(g_xmd.begin(), g_xmd.end(), 0.0);
    spmm_adjoint_of_forward(inst.quad, g_m1, g_xmd, d);

    // x_md = (1-mom) x_bar_in + mom x_in
    for (std::size_t i = 0; i < n * d; ++i) {
      d_momentum += (tl.x_in[i] - tl.xbar_in[i]) * g_xmd[i];
      g_xbar[i] += (1.0 - s.momentum) * g_xmd[i];
      g_xin[i] += s.momentum * g_xmd[i];
    }

    // Chain squashing reparameterizations onto the raw scalars.
    if (params.squash_scalars) {
      const double sig = logistic(lp.raw_momentum);
      gl.raw_momentum += d_momentum * sig * (1.0 - sig);
      gl.raw_primal_step += d_primal * logistic(lp.raw_primal_step);
      gl.raw_dual_step += d_dual * logistic(lp.raw_dual_step);
      gl.raw_extrapolation += d_extrapolation * logistic(lp.raw_extrapolation);
    } else {
      gl.raw_momentum += d_momentum;
      gl.raw_primal_step += d_primal;
      gl.raw_dual_step += d_dual;
      gl.raw_extrapolation += d_extrapolation;
    }

    g_x = std::move(g_xin);
  }

  // X^0 = embed_x(0) repeated across nodes and X_bar^0 = X^0; backward is
  // linear in the upstream gradient, so the node sum feeds one MLP pass.
  std::vector<double> g_embed_x(d, 0.0), g_embed_y(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ch = 0; ch < d; ++ch) g_embed_x[ch] += g_x[i * d + ch] + g_xbar[i * d + ch];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t ch = 0; ch < d; ++ch) g_embed_y[ch] += g_y[i * d + ch];
  mlp_backward_batch(params.embed_x, trace.embed_x_trace, g_embed_x.data(), 1, nullptr,
                     grads.embed_x);
  mlp_backward_batch(params.embed_y, trace.embed_y_trace, g_embed_y.data(), 1, nullptr,
                     grads.embed_y);

  return grads;
}

double gradcheck(const NetConfig& cfg, const QpInstance& inst, std::uint64_t seed, double h,
                 int samples) {
  const double norm_q = spectral_norm_estimate(inst.quad, 50, seed);
  const double norm_a = spectral_norm_estimate(inst.constraints, 50, seed + 1);
  NetParams params = init_params(cfg, norm_q, norm_a, seed);

  ForwardTrace trace;
  const PrimalDualPoint out = forward(inst, params, &trace);
  PointGradient pg;
  unsupervised_loss_grad(inst, out, pg);
  const GradientSet analytic = backward(inst, params, trace, pg);
  // The residual denominators are non-differentiated constants of the
  // training objective, so the difference quotient must hold them at their
  // base-point values.
  const LossDenoms denoms = loss_denoms(inst, out);

  struct View {
    double* data;
    std::size_t count;
  };
  std::vector<View> param_views, grad_views;
  for_each_tensor(params, [&](const std::string&, double* ptr, std::size_t count) {
    param_views.push_back({ptr, count});
  });
  for_each_tensor(const_cast<GradientSet&>(analytic),
                  [&](const std::string&, double* ptr, std::size_t count) {
                    grad_views.push_back({ptr, count});
                  });

  std::size_t total = 0;
  for (const View& v : param_views) total += v.count;

  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  double max_rel = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::size_t flat = rng.below(total);
    std::size_t t = 0;
    while (flat >= param_views[t].count) {
      flat -= param_views[t].count;
      ++t;
    }
    double* coord = param_views[t].data + flat;
    const double analytic_g = grad_views[t].data[flat];
    const double saved = *coord;

    *coord = saved + h;
    const double up = unsupervised_loss_frozen(inst, forward(inst, params), denoms).total;
    *coord = saved - h;
    const double down = unsupervised_loss_frozen(inst, forward(inst, params), denoms).total;
    *coord = saved;

    const double fd = (up - down) / (2.0 * h);
    const double scale = std::max({std::abs(fd), std::abs(analytic_g), 1e-6});
    max_rel = std::max(max_rel, std::abs(fd - analytic_g) / scale);
  }
  return max_rel;
}

}  // namespace pdqp
