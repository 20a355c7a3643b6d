#include "pdqp/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "pdqp/errors.hpp"
#include "pdqp/sparse.hpp"

namespace pdqp {

namespace {

struct TensorView {
  double* data;
  std::size_t count;
};

std::vector<TensorView> views(NetParams& p) {
  std::vector<TensorView> out;
  for_each_tensor(p, [&](const std::string&, double* data, std::size_t count) {
    out.push_back({data, count});
  });
  return out;
}

void accumulate(GradientSet& into, const GradientSet& from, double scale) {
  auto vi = views(into);
  auto vf = views(const_cast<GradientSet&>(from));
  for (std::size_t t = 0; t < vi.size(); ++t)
    for (std::size_t i = 0; i < vi[t].count; ++i) vi[t].data[i] += scale * vf[t].data[i];
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lr >= 0.0)) throw ContractViolation("train: lr must be >= 0");
  if (max_steps < 1) throw ContractViolation("train: max_steps must be >= 1");
  if (batch < 1) throw ContractViolation("train: batch must be >= 1");
}

AdamW::AdamW(const NetParams& shape) : m_(zeros_like(shape)), v_(zeros_like(shape)) {}

void AdamW::step(NetParams& params, const GradientSet& grads, const TrainConfig& cfg) {
  ++t_;
  auto vp = views(params);
  auto vg = views(const_cast<GradientSet&>(grads));
  auto vm = views(m_);
  auto vv = views(v_);
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(t_));
  for (std::size_t t = 0; t < vp.size(); ++t) {
    for (std::size_t i = 0; i < vp[t].count; ++i) {
      const double g = vg[t].data[i];
      double& m = vm[t].data[i];
      double& v = vv[t].data[i];
      m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
      v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g * g;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      double& p = vp[t].data[i];
      p -= cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.adam_eps) + cfg.weight_decay * p);
    }
  }
}

TrainResult train(const std::vector<QpInstance>& instances, const TrainConfig& cfg,
                  const NetConfig& net_cfg, const std::vector<PrimalDualPoint>* labels) {
  cfg.validate();
  net_cfg.validate();
  if (instances.empty()) throw ContractViolation("train: empty instance list");
  if (cfg.loss_mode == LossMode::Supervised &&
      (labels == nullptr || labels->size() != instances.size()))
    throw ContractViolation("train: supervised mode needs one label per instance");

  // Step scalars are initialized from the mean spectral norms of the
  // training set.
  double norm_q = 0.0, norm_a = 0.0;
  for (const QpInstance& inst : instances) {
    norm_q += spectral_norm_estimate(inst.quad, 50, cfg.seed);
    norm_a += spectral_norm_estimate(inst.constraints, 50, cfg.seed + 1);
  }
  norm_q /= static_cast<double>(instances.size());
  norm_a /= static_cast<double>(instances.size());

  TrainResult result;
  result.params = init_params(net_cfg, norm_q, norm_a, cfg.seed, cfg.init_noise);
  AdamW optimizer(result.params);

  std::vector<double> totals;
  totals.reserve(cfg.max_steps);

  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    GradientSet batch_grad = zeros_like(result.params);
    double batch_total = 0.0, batch_rp = 0.0, batch_rd = 0.0, batch_rg = 0.0;

    for (std::size_t t = 0; t < cfg.batch; ++t) {
      const std::size_t idx = (step * cfg.batch + t) % instances.size();
      const QpInstance& inst = instances[idx];

      ForwardTrace trace;
      const PrimalDualPoint out = forward(inst, result.params, &trace);

      PointGradient pg;
      LossValue lv;
      if (cfg.loss_mode == LossMode::Unsupervised) {
        lv = unsupervised_loss_grad(inst, out, pg);
        batch_rp += lv.components[0];
        batch_rd += lv.components[1];
        batch_rg += lv.components[2];
      } else {
        lv = supervised_loss_grad(inst, out, (*labels)[idx], pg);
        // Residuals of the prediction are still logged for comparison plots.
        const LossValue kkt = unsupervised_loss(inst, out);
        batch_rp += kkt.components[0];
        batch_rd += kkt.components[1];
        batch_rg += kkt.components[2];
      }
      batch_total += lv.total;

      const GradientSet g = backward(inst, result.params, trace, pg);
      accumulate(batch_grad, g, 1.0 / static_cast<double>(cfg.batch));
    }

    const double denom = static_cast<double>(cfg.batch);
    const double loss = batch_total / denom;
    if (!std::isfinite(loss)) throw DivergedError("training loss diverged", step);

    result.history.push_back(
        {step, loss, batch_rp / denom, batch_rd / denom, batch_rg / denom});
    totals.push_back(loss);

    optimizer.step(result.params, batch_grad, cfg);
    result.steps_run = step + 1;

    const std::size_t w = cfg.early_stop_window;
    if (w > 0 && totals.size() >= 2 * w) {
      const auto tail = totals.end();
      const double ma_now = std::accumulate(tail - static_cast<std::ptrdiff_t>(w), tail, 0.0) /
                            static_cast<double>(w);
      const double ma_prev =
          std::accumulate(tail - static_cast<std::ptrdiff_t>(2 * w),
                          tail - static_cast<std::ptrdiff_t>(w), 0.0) /
          static_cast<double>(w);
      if (ma_prev - ma_now < cfg.early_stop_delta) {
        result.early_stopped = true;
        break;
      }
    }
  }
  return result;
}

std::string history_csv(const std::vector<TrainHistoryRow>& history) {
  std::string out = "step,total,r_primal,r_dual,r_gap\n";
  char buf[160];
  for (const TrainHistoryRow& r : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", r.step, r.total,
                  r.rel_primal, r.rel_dual, r.rel_gap);
    out += buf;
  }
  return out;
}

}  // namespace pdqp
