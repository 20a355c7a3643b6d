#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pdqp/instance.hpp"
#include "pdqp/residuals.hpp"

namespace pdqp {

enum class LossMode : std::uint8_t { Unsupervised = 0, Supervised = 1 };

/// Total plus components: (rel_primal, rel_dual, rel_gap) in unsupervised
/// mode, (mse_x, mse_y, 0) in supervised mode. total is always their sum.
struct LossValue {
  LossMode mode = LossMode::Unsupervised;
  double total = 0.0;
  std::array<double, 3> components{};
};

/// Gradient of a scalar loss with respect to the evaluated point.
struct PointGradient {
  std::vector<double> x;
  std::vector<double> y;
};

/// KKT-informed loss: rel_primal + rel_dual + rel_gap.
LossValue unsupervised_loss(const QpInstance& inst, const PrimalDualPoint& point,
                            double eps = kDefaultResidualEps);

/// Normalization constants of the three residuals at a reference point. The
/// training objective treats these as non-differentiated constants, so
/// finite-difference checks must evaluate the loss with them frozen.
struct LossDenoms {
  double primal = 1.0;
  double dual = 1.0;
  double gap = 1.0;
};
LossDenoms loss_denoms(const QpInstance& inst, const PrimalDualPoint& point,
                       double eps = kDefaultResidualEps);

/// Loss with the numerators evaluated at `point` but divided by frozen
/// reference denominators.
LossValue unsupervised_loss_frozen(const QpInstance& inst, const PrimalDualPoint& point,
                                   const LossDenoms& denoms,
                                   double eps = kDefaultResidualEps);

/// Same value plus its subgradient with respect to (x, y). The max-norm
/// numerators route gradient to the lowest-index maximizer; normalization
/// denominators are treated as constants; ReLU-style kinks use derivative 0.
LossValue unsupervised_loss_grad(const QpInstance& inst, const PrimalDualPoint& point,
                                 PointGradient& grad, double eps = kDefaultResidualEps);

/// Mean squared error against a solved reference point, equally weighted
/// between x and y.
LossValue supervised_loss(const QpInstance& inst, const PrimalDualPoint& point,
                          const PrimalDualPoint& oracle);
LossValue supervised_loss_grad(const QpInstance& inst, const PrimalDualPoint& point,
                               const PrimalDualPoint& oracle, PointGradient& grad);

}  // namespace pdqp
