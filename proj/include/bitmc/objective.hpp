#pragma once

#include <utility>
#include <vector>

#include "bitmc/factored_point.hpp"
#include "bitmc/link_model.hpp"
#include "bitmc/sampling.hpp"

namespace bitmc {

// Average negative log-likelihood over the observation multiset together
// with its sparse gradient in M, aggregated over duplicate cells and kept
// in deterministic (row, col) order.
struct LossEvaluation {
  struct Entry {
    int row = 0;
    int col = 0;
    double g = 0.0;
  };
  double value = 0.0;
  std::vector<Entry> grad_sparse;
};

// -log F(x) for y=+1, -log(1-F(x)) for y=-1, evaluated in the log domain.
double pointwise_loss(const LinkModel& model, double x, int y);

// d/dx of pointwise_loss: -F'/F for y=+1, +F'/(1-F) for y=-1.
double pointwise_grad(const LinkModel& model, double x, int y);

// Only the entries of U V^T at observed cells are formed.
LossEvaluation average_loss(const ObservationSet& obs, const FactoredPoint& point,
                            const LinkModel& model);

// (dU, dV) = (G V, G^T U) for the sparse gradient matrix G.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> factor_gradient(
    const LossEvaluation& loss_eval, const FactoredPoint& point);

}  // namespace bitmc
