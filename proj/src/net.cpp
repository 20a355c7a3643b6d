#include "pdqp/net.hpp"

#include <cmath>

#include "pdqp/errors.hpp"
#include "pdqp/projection.hpp"
#include "pdqp/rng.hpp"
#include "pdqp/sparse.hpp"

namespace pdqp {

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double softplus(double t) {
  if (t > 30.0) return t;
  return std::log1p(std::exp(t));
}

double logit(double p) {
  const double q = std::min(std::max(p, 1e-12), 1.0 - 1e-12);
  return std::log(q / (1.0 - q));
}

double softplus_inv(double v) {
  const double w = std::max(v, 1e-12);
  if (w > 30.0) return w;
  return std::log(std::expm1(w));
}

// C = M * B, B is (M.ncols x d) row-major, C is (M.nrows x d).
void spmm(const SparseMatrix& m, const std::vector<double>& b, std::vector<double>& c,
          std::size_t d) {
  std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t i = 0; i < m.nrows; ++i) {
    double* ci = c.data() + i * d;
    for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p) {
      const double v = m.values[p];
      const double* bj = b.data() + m.col_indices[p] * d;
      for (std::size_t ch = 0; ch < d; ++ch) ci[ch] += v * bj[ch];
    }
  }
}

// C = M^T * B, B is (M.nrows x d), C is (M.ncols x d).
void spmm_transpose(const SparseMatrix& m, const std::vector<double>& b, std::vector<double>& c,
                    std::size_t d) {
  std::fill(c.begin(), c.end(), 0.0);
  for (std::size_t i = 0; i < m.nrows; ++i) {
    const double* bi = b.data() + i * d;
    for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p) {
      double* cj = c.data() + m.col_indices[p] * d;
      const double v = m.values[p];
      for (std::size_t ch = 0; ch < d; ++ch) cj[ch] += v * bi[ch];
    }
  }
}

// C = B * W, B is (rows x d), W is (d x d) row-major.
void mix(const std::vector<double>& b, std::size_t rows, const std::vector<double>& w,
         std::size_t d, std::vector<double>& c) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* br = b.data() + r * d;
    double* cr = c.data() + r * d;
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t e = 0; e < d; ++e) acc += br[e] * w[e * d + j];
      cr[j] = acc;
    }
  }
}

bool all_finite(const std::vector<double>& v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

void check_mlp_shape(const Mlp& mlp, std::size_t in, std::size_t out, const char* what) {
  if (mlp.layers.empty() || mlp.in_dim() != in || mlp.out_dim() != out)
    throw ContractViolation(std::string("net: bad ") + what + " shape");
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    const DenseLayer& dl = mlp.layers[l];
    if (dl.weight.size() != dl.in_dim * dl.out_dim || dl.bias.size() != dl.out_dim)
      throw ContractViolation(std::string("net: bad ") + what + " tensor sizes");
    if (l > 0 && dl.in_dim != mlp.layers[l - 1].out_dim)
      throw ContractViolation(std::string("net: ") + what + " layer dims do not chain");
  }
}

}  // namespace

void NetConfig::validate() const {
  if (layers < 1) throw ContractViolation("net: layers must be >= 1");
  if (width < 1) throw ContractViolation("net: width must be >= 1");
  if (mlp_depth < 1) throw ContractViolation("net: mlp_depth must be >= 1");
  if (mlp_depth >= 2 && mlp_hidden < 2)
    throw ContractViolation("net: mlp_depth >= 2 needs mlp_hidden >= 2");
}

void NetParams::validate() const {
  config.validate();
  if (layers.size() != config.layers) throw ContractViolation("net: wrong number of layers");
  const std::size_t d = config.width;
  for (const Layer& l : layers) {
    if (l.w_qx.size() != d * d || l.w_aty.size() != d * d || l.w_ax.size() != d * d)
      throw ContractViolation("net: mixing matrix size mismatch");
    if (!std::isfinite(l.raw_momentum) || !std::isfinite(l.raw_primal_step) ||
        !std::isfinite(l.raw_dual_step) || !std::isfinite(l.raw_extrapolation))
      throw ContractViolation("net: non-finite step scalar");
  }
  check_mlp_shape(embed_x, 1, d, "embed_x");
  check_mlp_shape(embed_y, 1, d, "embed_y");
  check_mlp_shape(read_x, d, 1, "read_x");
  check_mlp_shape(read_y, d, 1, "read_y");
}

StepSizes NetParams::effective(std::size_t layer) const {
  const Layer& l = layers.at(layer);
  StepSizes s;
  if (squash_scalars) {
    s.momentum = logistic(l.raw_momentum);
    s.primal_step = softplus(l.raw_primal_step);
    s.dual_step = softplus(l.raw_dual_step);
    s.extrapolation = softplus(l.raw_extrapolation);
  } else {
    s.momentum = l.raw_momentum;
    s.primal_step = l.raw_primal_step;
    s.dual_step = l.raw_dual_step;
    s.extrapolation = l.raw_extrapolation;
  }
  return s;
}

PrimalDualPoint forward(const QpInstance& inst, const NetParams& params, ForwardTrace* trace) {
  params.validate();
  const std::size_t n = inst.n, m = inst.m, d = params.config.width;
  const std::size_t big_k = params.config.layers;

  // Initial embeddings of the zero vectors: every node shares one MLP
  // evaluation.
  std::vector<double> zero_in(1, 0.0);
  std::vector<double> ex(d), ey(d);
  MlpTrace ex_trace, ey_trace;
  mlp_forward_batch(params.embed_x, zero_in.data(), 1, ex.data(),
                    trace ? &ex_trace : nullptr);
  mlp_forward_batch(params.embed_y, zero_in.data(), 1, ey.data(),
                    trace ? &ey_trace : nullptr);

  std::vector<double> x(n * d), xbar, y(m * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ch = 0; ch < d; ++ch) x[i * d + ch] = ex[ch];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t ch = 0; ch < d; ++ch) y[i * d + ch] = ey[ch];
  xbar = x;

  if (trace) {
    trace->layers.clear();
    trace->layers.resize(big_k);
    trace->embed_x_trace = std::move(ex_trace);
    trace->embed_y_trace = std::move(ey_trace);
  }

  std::vector<double> x_md(n * d), q_xmd(n * d), m_qx(n * d), aty(n * d), m_aty(n * d),
      grad_x(n * d), x_next(n * d), ext(n * d), a_ext(m * d), m_ax(m * d), grad_y(m * d);

  for (std::size_t k = 0; k < big_k; ++k) {
    const StepSizes s = params.effective(k);
    const NetParams::Layer& lp = params.layers[k];

    for (std::size_t i = 0; i < n * d; ++i)
      x_md[i] = (1.0 - s.momentum) * xbar[i] + s.momentum * x[i];

    spmm(inst.quad, x_md, q_xmd, d);
    mix(q_xmd, n, lp.w_qx, d, m_qx);
    spmm_transpose(inst.constraints, y, aty, d);
    mix(aty, n, lp.w_aty, d, m_aty);

    std::vector<std::uint8_t> mask_x(n * d), mask_y(m * d);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = inst.lower[i], hi = inst.upper[i];
      const double has_lo = inst.has_lower[i], has_hi = inst.has_upper[i];
      for (std::size_t ch = 0; ch < d; ++ch) {
        const std::size_t idx = i * d + ch;
        const double g = (m_qx[idx] + inst.linear[i]) - m_aty[idx];
        grad_x[idx] = g;
        const double pre = x[idx] - s.primal_step * g;
        x_next[idx] = project_interval(pre, lo, hi, has_lo, has_hi);
        const double w = pre - has_hi * relu(pre - hi);
        mask_x[idx] = static_cast<std::uint8_t>((has_hi != 0.0 && pre - hi > 0.0) ? 0
                      : (has_lo != 0.0 && lo - w > 0.0)                           ? 0
                                                                                  : 1);
      }
    }

    for (std::size_t i = 0; i < n * d; ++i)
      ext[i] = s.extrapolation * (x_next[i] - x[i]) + x_next[i];
    spmm(inst.constraints, ext, a_ext, d);
    mix(a_ext, m, lp.w_ax, d, m_ax);

    std::vector<double> y_next(m * d);
    for (std::size_t i = 0; i < m; ++i) {
      const double ineq = inst.is_inequality[i];
      for (std::size_t ch = 0; ch < d; ++ch) {
        const std::size_t idx = i * d + ch;
        const double g = inst.rhs[i] - m_ax[idx];
        grad_y[idx] = g;
        const double pre = y[idx] + s.dual_step * g;
        y_next[idx] = project_dual_elem(pre, ineq);
        mask_y[idx] = static_cast<std::uint8_t>((ineq != 0.0 && pre < 0.0) ? 0 : 1);
      }
    }

    if (trace) {
      ForwardTrace::Layer& tl = trace->layers[k];
      tl.x_in = x;
      tl.xbar_in = xbar;
      tl.y_in = y;
      tl.q_xmd = q_xmd;
      tl.aty = aty;
      tl.grad_x = grad_x;
      tl.a_ext = a_ext;
      tl.grad_y = grad_y;
      tl.mask_x = std::move(mask_x);
      tl.mask_y = std::move(mask_y);
    }

    for (std::size_t i = 0; i < n * d; ++i)
      xbar[i] = (1.0 - s.momentum) * xbar[i] + s.momentum * x_next[i];
    x = x_next;
    y = std::move(y_next);

    if (!all_finite(x) || !all_finite(y)) throw DivergedError("forward diverged", k);
    if (trace) trace->layers[k].x_out = x;
  }

  // Readouts, then one more projection so predictions are bound-feasible.
  std::vector<double> x_read(n), y_read(m);
  MlpTrace rx_trace, ry_trace;
  if (n > 0)
    mlp_forward_batch(params.read_x, x.data(), n, x_read.data(), trace ? &rx_trace : nullptr);
  if (m > 0)
    mlp_forward_batch(params.read_y, y.data(), m, y_read.data(), trace ? &ry_trace : nullptr);

  PrimalDualPoint out;
  out.x.resize(n);
  out.y.resize(m);
  std::vector<std::uint8_t> mask_xr(n), mask_yr(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double pre = x_read[i];
    const double lo = inst.lower[i], hi = inst.upper[i];
    const double has_lo = inst.has_lower[i], has_hi = inst.has_upper[i];
    out.x[i] = project_interval(pre, lo, hi, has_lo, has_hi);
    const double w = pre - has_hi * relu(pre - hi);
    mask_xr[i] = static_cast<std::uint8_t>((has_hi != 0.0 && pre - hi > 0.0) ? 0
                 : (has_lo != 0.0 && lo - w > 0.0)                           ? 0
                                                                             : 1);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double pre = y_read[i];
    out.y[i] = project_dual_elem(pre, inst.is_inequality[i]);
    mask_yr[i] =
        static_cast<std::uint8_t>((inst.is_inequality[i] != 0.0 && pre < 0.0) ? 0 : 1);
  }
  if (!all_finite(out.x) || !all_finite(out.y))
    throw DivergedError("forward diverged", big_k);

  if (trace) {
    trace->x_final = std::move(x);
    trace->y_final = std::move(y);
    trace->read_x_trace = std::move(rx_trace);
    trace->read_y_trace = std::move(ry_trace);
    trace->x_readout = std::move(x_read);
    trace->y_readout = std::move(y_read);
    trace->mask_x_read = std::move(mask_xr);
    trace->mask_y_read = std::move(mask_yr);
    trace->output = out;
  }
  return out;
}

NetParams alignment_params(const StepSchedule& schedule, std::size_t layers) {
  schedule.validate();
  if (layers < 1) throw ContractViolation("alignment_params: layers must be >= 1");
  if (schedule.restart_len < layers)
    throw ContractViolation("alignment_params: schedule shorter than the network");

  NetParams p;
  p.config = NetConfig{layers, 1, 1, 1};
  p.squash_scalars = false;
  p.layers.resize(layers);
  for (std::size_t k = 0; k < layers; ++k) {
    const StepSizes s = schedule_at(schedule, k);
    NetParams::Layer& l = p.layers[k];
    l.raw_momentum = s.momentum;
    l.raw_primal_step = s.primal_step;
    l.raw_dual_step = s.dual_step;
    l.raw_extrapolation = s.extrapolation;
    l.w_qx = {1.0};
    l.w_aty = {1.0};
    l.w_ax = {1.0};
  }
  p.embed_x = identity_mlp(1, 1, 1, 1);
  p.embed_y = identity_mlp(1, 1, 1, 1);
  p.read_x = identity_mlp(1, 1, 1, 1);
  p.read_y = identity_mlp(1, 1, 1, 1);
  return p;
}

NetParams init_params(const NetConfig& cfg, double norm_q, double norm_a, std::uint64_t seed,
                      double noise) {
  cfg.validate();
  StepSchedule schedule{norm_q, norm_a > 0.0 ? norm_a : 1.0, cfg.layers};
  Rng rng(seed);
  const std::size_t d = cfg.width;

  NetParams p;
  p.config = cfg;
  p.squash_scalars = true;
  p.layers.resize(cfg.layers);
  for (std::size_t k = 0; k < cfg.layers; ++k) {
    const StepSizes s = schedule_at(schedule, k);
    NetParams::Layer& l = p.layers[k];
    l.raw_momentum = logit(s.momentum);
    l.raw_primal_step = softplus_inv(s.primal_step);
    l.raw_dual_step = softplus_inv(s.dual_step);
    l.raw_extrapolation = softplus_inv(s.extrapolation);
    auto noisy_identity = [&] {
      std::vector<double> w(d * d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          w[i * d + j] = (i == j ? 1.0 : 0.0) + noise * rng.normal();
      return w;
    };
    l.w_qx = noisy_identity();
    l.w_aty = noisy_identity();
    l.w_ax = noisy_identity();
  }

  auto noisy_mlp = [&](std::size_t in, std::size_t out) {
    Mlp m = identity_mlp(in, out, cfg.mlp_hidden, cfg.mlp_depth);
    for (DenseLayer& dl : m.layers)
      for (double& w : dl.weight) w += noise * rng.normal();
    return m;
  };
  p.embed_x = noisy_mlp(1, d);
  p.embed_y = noisy_mlp(1, d);
  p.read_x = noisy_mlp(d, 1);
  p.read_y = noisy_mlp(d, 1);
  return p;
}

NetParams zeros_like(const NetParams& p) {
  NetParams z = p;
  for (NetParams::Layer& l : z.layers) {
    l.raw_momentum = l.raw_primal_step = l.raw_dual_step = l.raw_extrapolation = 0.0;
    std::fill(l.w_qx.begin(), l.w_qx.end(), 0.0);
    std::fill(l.w_aty.begin(), l.w_aty.end(), 0.0);
    std::fill(l.w_ax.begin(), l.w_ax.end(), 0.0);
  }
  z.embed_x = zeros_like(p.embed_x);
  z.embed_y = zeros_like(p.embed_y);
  z.read_x = zeros_like(p.read_x);
  z.read_y = zeros_like(p.read_y);
  return z;
}

}  // namespace pdqp
