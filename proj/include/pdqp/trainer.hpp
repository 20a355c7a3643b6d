#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdqp/autodiff.hpp"
#include "pdqp/loss.hpp"
#include "pdqp/net.hpp"

namespace pdqp {

struct TrainConfig {
  double lr = 1e-4;
  std::size_t max_steps = 1000;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double weight_decay = 0.01;
  double adam_eps = 1e-8;
  std::size_t batch = 8;
  LossMode loss_mode = LossMode::Unsupervised;
  std::uint64_t seed = 0;
  double early_stop_delta = 1e-8;     ///< required moving-average improvement
  std::size_t early_stop_window = 50; ///< steps per moving-average window
  double init_noise = 0.01;

  void validate() const;
};

/// Decoupled-weight-decay adaptive-moment optimizer over every tensor of a
/// NetParams (one group, one learning rate).
class AdamW {
 public:
  explicit AdamW(const NetParams& shape);
  void step(NetParams& params, const GradientSet& grads, const TrainConfig& cfg);

 private:
  NetParams m_, v_;
  std::size_t t_ = 0;
};

struct TrainHistoryRow {
  std::size_t step = 0;
  double total = 0.0;       ///< training loss (mode-dependent)
  double rel_primal = 0.0;  ///< KKT residuals of the batch predictions,
  double rel_dual = 0.0;    ///< averaged; logged in both modes
  double rel_gap = 0.0;
};

struct TrainResult {
  NetParams params;
  std::vector<TrainHistoryRow> history;
  std::size_t steps_run = 0;
  bool early_stopped = false;
};

/// Mini-batch training. Batches cycle deterministically through the instance
/// list; gradients are reduced by ordered summation, so runs are reproducible
/// per seed. Supervised mode requires one label per instance. Throws
/// DivergedError (with the step index) if the loss becomes non-finite, and
/// stops early once the moving-average loss improves by less than
/// early_stop_delta over early_stop_window steps.
TrainResult train(const std::vector<QpInstance>& instances, const TrainConfig& cfg,
                  const NetConfig& net_cfg,
                  const std::vector<PrimalDualPoint>* labels = nullptr);

/// History CSV: "step,total,r_primal,r_dual,r_gap".
std::string history_csv(const std::vector<TrainHistoryRow>& history);

}  // namespace pdqp
