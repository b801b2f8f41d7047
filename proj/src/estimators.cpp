#include "bitmc/estimators.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bitmc/norms.hpp"
#include "bitmc/rng.hpp"

namespace bitmc {

std::string Diagnostics::to_json() const {
  std::ostringstream out;
  out.precision(17);
  out << "{\"objective\":" << objective << ",\"k_used\":" << k_used
      << ",\"iterations\":" << iterations << "}";
  return out.str();
}

EstimateResult max_norm_mle(const ObservationSet& obs, const LinkModel& model,
                            const EstimatorSpec& spec) {
  if (spec.kind != EstimatorKind::MaxNorm)
    throw std::invalid_argument("max_norm_mle: spec.kind must be MaxNorm");
  SolverConfig config = spec.solver;
  config.alpha = spec.alpha;
  config.R = spec.radius;

  SolveResult solve;
  int k_used;
  if (spec.use_rank_escalation) {
    EscalationResult esc = rank_escalation_solve(obs, model, config, spec.k0, spec.k_max);
    solve = std::move(esc.solve);
    k_used = esc.k_used;
  } else {
    solve = pgd_solve(obs, model, config);
    k_used = config.k;
  }

  EstimateResult result;
  result.estimate = solve.point.product();
  result.point = std::move(solve.point);
  result.diag = {solve.objective, k_used, solve.iterations};
  result.trace = std::move(solve.trace);
  return result;
}

namespace {

// Marginals used to reweight the factors, per the configured source.
std::pair<Eigen::VectorXd, Eigen::VectorXd> resolve_marginals(
    const ObservationSet& obs, const EstimatorSpec& spec,
    const SamplingDistribution* dist) {
  switch (spec.marginals_source) {
    case MarginalsSource::True: {
      if (dist == nullptr)
        throw std::invalid_argument("weighted_trace_mle: true marginals need a distribution");
      Eigen::VectorXd row = dist->row_marginals();
      Eigen::VectorXd col = dist->col_marginals();
      if ((row.array() <= 0.0).any() || (col.array() <= 0.0).any())
        throw std::invalid_argument("weighted_trace_mle: zero true marginal");
      return {std::move(row), std::move(col)};
    }
    case MarginalsSource::Empirical:
      return empirical_marginals(obs);
    case MarginalsSource::SmoothedEmpirical:
      return smoothed_empirical_marginals(obs);
  }
  throw std::logic_error("unreachable");
}

// Restore the factored trace budget by a global shrink of both factors.
void enforce_trace_budget(FactoredPoint& x, const Eigen::VectorXd& sqrt_row,
                          const Eigen::VectorXd& sqrt_col, double budget) {
  const double cur = 0.5 * ((sqrt_row.asDiagonal() * x.U).squaredNorm() +
                            (sqrt_col.asDiagonal() * x.V).squaredNorm());
  if (cur > budget) {
    const double s = std::sqrt(budget / cur);
    x.U *= s;
    x.V *= s;
  }
}

}  // namespace

EstimateResult weighted_trace_mle(const ObservationSet& obs, const LinkModel& model,
                                  const EstimatorSpec& spec,
                                  const SamplingDistribution* dist) {
  if (spec.kind != EstimatorKind::WeightedTrace)
    throw std::invalid_argument("weighted_trace_mle: spec.kind must be WeightedTrace");
  if (!(spec.radius > 0.0) || !(spec.alpha > 0.0))
    throw std::invalid_argument("weighted_trace_mle: alpha and radius must be > 0");
  if (obs.samples.empty())
    throw std::invalid_argument("weighted_trace_mle: empty observations");

  const auto [row_marg, col_marg] = resolve_marginals(obs, spec, dist);
  const Eigen::VectorXd sqrt_row = row_marg.array().sqrt();
  const Eigen::VectorXd sqrt_col = col_marg.array().sqrt();
  const SolverConfig& cfg = spec.solver;
  if (cfg.k < 1 || cfg.max_iters < 1 || !(cfg.tau > 0.0) || !(cfg.tol > 0.0))
    throw std::invalid_argument("weighted_trace_mle: invalid solver config");

  // feasible start
  Rng rng(cfg.seed);
  const double s0 = 0.5 * std::sqrt(spec.alpha / cfg.k);
  FactoredPoint x{Eigen::MatrixXd(obs.d1, cfg.k), Eigen::MatrixXd(obs.d2, cfg.k)};
  for (Eigen::Index i = 0; i < x.U.rows(); ++i)
    for (Eigen::Index j = 0; j < x.U.cols(); ++j) x.U(i, j) = rng.uniform(-s0, s0);
  for (Eigen::Index i = 0; i < x.V.rows(); ++i)
    for (Eigen::Index j = 0; j < x.V.cols(); ++j) x.V(i, j) = rng.uniform(-s0, s0);
  enforce_trace_budget(x, sqrt_row, sqrt_col, spec.radius);
  x = project_inf(std::move(x), spec.alpha);

  std::vector<double> trace;
  FactoredPoint best = x;
  double best_value = std::numeric_limits<double>::infinity();
  int t = 0;
  const int window = 10;
  for (; t < cfg.max_iters; ++t) {
    LossEvaluation eval;
    try {
      eval = average_loss(obs, x, model);
    } catch (const std::overflow_error&) {
      throw SolverError("weighted_trace_mle: objective overflow", t);
    }
    if (!std::isfinite(eval.value))
      throw SolverError("weighted_trace_mle: non-finite objective", t);
    trace.push_back(eval.value);
    if (eval.value < best_value) {
      best_value = eval.value;
      best = x;
    }
    const size_t m = trace.size();
    if (m > static_cast<size_t>(window) &&
        trace[m - 1 - window] - trace[m - 1] <
            cfg.tol * std::max(1.0, std::abs(trace[m - 1 - window])))
      break;

    const double step = cfg.tau / std::sqrt(static_cast<double>(t) + 1.0);
    auto [dU, dV] = factor_gradient(eval, x);
    x.U -= step * dU;
    x.V -= step * dV;
    enforce_trace_budget(x, sqrt_row, sqrt_col, spec.radius);
    x = project_inf(std::move(x), spec.alpha);
  }

  double final_value;
  try {
    final_value = average_loss(obs, x, model).value;
  } catch (const std::overflow_error&) {
    throw SolverError("weighted_trace_mle: objective overflow", t);
  }
  if (final_value < best_value) {
    best_value = final_value;
    best = std::move(x);
  }

  EstimateResult result;
  result.estimate = best.product();
  result.point = std::move(best);
  result.diag = {best_value, cfg.k, t};
  result.trace = std::move(trace);
  return result;
}

}  // namespace bitmc
