#include "bitmc/objective.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace bitmc {

double pointwise_loss(const LinkModel& model, double x, int y) {
  if (y != 1 && y != -1) throw std::invalid_argument("pointwise_loss: y must be +-1");
  const double v = y == 1 ? -log_F(model, x) : -log_1mF(model, x);
  if (!std::isfinite(v))
    throw std::overflow_error("pointwise_loss: F(x) saturated at 0 or 1");
  return v;
}

double pointwise_grad(const LinkModel& model, double x, int y) {
  if (y != 1 && y != -1) throw std::invalid_argument("pointwise_grad: y must be +-1");
  const double g = y == 1 ? -ratio_dF_F(model, x) : ratio_dF_1mF(model, x);
  if (!std::isfinite(g))
    throw std::overflow_error("pointwise_grad: F(x) saturated at 0 or 1");
  return g;
}

LossEvaluation average_loss(const ObservationSet& obs, const FactoredPoint& point,
                            const LinkModel& model) {
  if (obs.samples.empty()) throw std::invalid_argument("average_loss: empty observations");
  if (point.d1() != obs.d1 || point.d2() != obs.d2)
    throw std::invalid_argument("average_loss: dimension mismatch");
  const double inv_n = 1.0 / static_cast<double>(obs.samples.size());
  // std::map keeps grad entries in (row, col) order, so the reduction is
  // deterministic regardless of how the samples are listed
  std::map<std::pair<int, int>, double> grad;
  LossEvaluation eval;
  for (const auto& s : obs.samples) {
    const double x = point.U.row(s.row).dot(point.V.row(s.col));
    eval.value += inv_n * pointwise_loss(model, x, s.sign);
    grad[{s.row, s.col}] += inv_n * pointwise_grad(model, x, s.sign);
  }
  eval.grad_sparse.reserve(grad.size());
  for (const auto& [cell, g] : grad)
    eval.grad_sparse.push_back({cell.first, cell.second, g});
  return eval;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> factor_gradient(
    const LossEvaluation& loss_eval, const FactoredPoint& point) {
  Eigen::MatrixXd dU = Eigen::MatrixXd::Zero(point.U.rows(), point.U.cols());
  Eigen::MatrixXd dV = Eigen::MatrixXd::Zero(point.V.rows(), point.V.cols());
  for (const auto& e : loss_eval.grad_sparse) {
    dU.row(e.row) += e.g * point.V.row(e.col);
    dV.row(e.col) += e.g * point.U.row(e.row);
  }
  return {std::move(dU), std::move(dV)};
}

}  // namespace bitmc
