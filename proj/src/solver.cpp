#include "bitmc/solver.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "bitmc/norms.hpp"
#include "bitmc/rng.hpp"

namespace bitmc {

namespace {

constexpr int kStopWindow = 10;

void check_config(const SolverConfig& c) {
  if (!(c.tau > 0.0) || !(c.tol > 0.0) || !(c.R > 0.0) || !(c.alpha > 0.0) || c.k < 1)
    throw std::invalid_argument("solver config: tau, tol, R, alpha must be > 0 and k >= 1");
  if (c.max_iters < 1)
    throw std::invalid_argument("solver config: max_iters must be >= 1");
}

void project_rows_inplace(Eigen::MatrixXd& A, double R) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double sq = A.row(i).squaredNorm();
    if (sq > R) {
      A.row(i) *= std::sqrt(R) / std::sqrt(sq);
      // roundoff can leave the row an ulp outside; nudge until inside so the
      // projection is exactly idempotent
      while (A.row(i).squaredNorm() > R) A.row(i) *= 1.0 - 1e-16;
    }
  }
}

double evaluate_or_throw(const ObservationSet& obs, const FactoredPoint& point,
                         const LinkModel& model, int iteration,
                         LossEvaluation* eval_out) {
  try {
    LossEvaluation eval = average_loss(obs, point, model);
    if (!std::isfinite(eval.value))
      throw SolverError("solver: non-finite objective", iteration);
    const double v = eval.value;
    if (eval_out) *eval_out = std::move(eval);
    return v;
  } catch (const std::overflow_error&) {
    throw SolverError("solver: objective overflow (diverged step)", iteration);
  }
}

bool window_converged(const std::vector<double>& trace, double tol) {
  const size_t n = trace.size();
  if (n < kStopWindow + 1) return false;
  const double before = trace[n - 1 - kStopWindow];
  const double now = trace[n - 1];
  return (before - now) < tol * std::max(1.0, std::abs(before));
}

}  // namespace

FactoredPoint project_factor_ball(FactoredPoint point, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("project_factor_ball: R must be > 0");
  project_rows_inplace(point.U, R);
  project_rows_inplace(point.V, R);
  return point;
}

FactoredPoint project_inf(FactoredPoint point, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("project_inf: alpha must be > 0");
  const double m = inf_norm(point.product());
  if (m > alpha) {
    const double s = std::sqrt(alpha / m);
    point.U *= s;
    point.V *= s;
    while (inf_norm(point.product()) > alpha) {
      point.U *= 1.0 - 1e-16;
      point.V *= 1.0 - 1e-16;
    }
  }
  return point;
}

FactoredPoint initial_point(int d1, int d2, const SolverConfig& config) {
  check_config(config);
  Rng rng(config.seed);
  const double s = 0.5 * std::sqrt(config.R / config.k);
  FactoredPoint p{Eigen::MatrixXd(d1, config.k), Eigen::MatrixXd(d2, config.k)};
  for (Eigen::Index i = 0; i < p.U.rows(); ++i)
    for (Eigen::Index j = 0; j < p.U.cols(); ++j) p.U(i, j) = rng.uniform(-s, s);
  for (Eigen::Index i = 0; i < p.V.rows(); ++i)
    for (Eigen::Index j = 0; j < p.V.cols(); ++j) p.V(i, j) = rng.uniform(-s, s);
  return project_inf(project_factor_ball(std::move(p), config.R), config.alpha);
}

SolveResult pgd_solve(const ObservationSet& obs, const LinkModel& model,
                      const SolverConfig& config,
                      std::optional<FactoredPoint> warm_start) {
  check_config(config);
  if (obs.samples.empty()) throw std::invalid_argument("pgd_solve: empty observations");

  FactoredPoint x = warm_start
                        ? project_inf(project_factor_ball(std::move(*warm_start), config.R),
                                      config.alpha)
                        : initial_point(obs.d1, obs.d2, config);

  SolveResult result;
  result.point = x;
  result.objective = std::numeric_limits<double>::infinity();

  int t = 0;
  for (; t < config.max_iters; ++t) {
    LossEvaluation eval;
    const double value = evaluate_or_throw(obs, x, model, t, &eval);
    result.trace.push_back(value);
    if (value < result.objective) {
      result.objective = value;
      result.point = x;
    }
    if (window_converged(result.trace, config.tol)) break;

    const double step = config.tau / std::sqrt(static_cast<double>(t) + 1.0);
    auto [dU, dV] = factor_gradient(eval, x);
    x.U -= step * dU;
    x.V -= step * dV;
    x = project_inf(project_factor_ball(std::move(x), config.R), config.alpha);
  }

  // the last update may have produced a better point than any recorded one
  const double final_value = evaluate_or_throw(obs, x, model, t, nullptr);
  result.trace.push_back(final_value);
  if (final_value < result.objective) {
    result.objective = final_value;
    result.point = std::move(x);
  }
  result.iterations = t;
  return result;
}

SolveResult sgd_solve(const ObservationSet& obs, const LinkModel& model,
                      const SolverConfig& config,
                      std::optional<FactoredPoint> warm_start) {
  check_config(config);
  if (config.mode != SolverMode::Stochastic)
    throw std::invalid_argument("sgd_solve: config.mode must be Stochastic");
  if (obs.samples.empty()) throw std::invalid_argument("sgd_solve: empty observations");

  Rng rng(splitmix64(config.seed ^ 0x5bd1e995u));
  FactoredPoint x = warm_start
                        ? project_inf(project_factor_ball(std::move(*warm_start), config.R),
                                      config.alpha)
                        : initial_point(obs.d1, obs.d2, config);

  const size_t n = obs.samples.size();
  SolveResult result;
  const int record_every = std::max(1, config.max_iters / 100);

  for (int t = 0; t < config.max_iters; ++t) {
    const Observation& s = obs.samples[rng.below(n)];
    const double step = config.tau / std::sqrt(static_cast<double>(t) + 1.0);

    Eigen::RowVectorXd u = x.U.row(s.row);
    Eigen::RowVectorXd v = x.V.row(s.col);
    double g;
    try {
      g = pointwise_grad(model, u.dot(v), s.sign);
    } catch (const std::overflow_error&) {
      throw SolverError("sgd_solve: gradient overflow", t);
    }
    x.U.row(s.row) = u - step * g * v;
    x.V.row(s.col) = v - step * g * u;

    const double usq = x.U.row(s.row).squaredNorm();
    if (usq > config.R) x.U.row(s.row) *= std::sqrt(config.R / usq);
    const double vsq = x.V.row(s.col).squaredNorm();
    if (vsq > config.R) x.V.row(s.col) *= std::sqrt(config.R / vsq);

    const double prod = std::abs(x.U.row(s.row).dot(x.V.row(s.col)));
    if (prod > config.alpha) {
      const double sc = std::sqrt(config.alpha) / std::sqrt(prod);
      x.U.row(s.row) *= sc;
      x.V.row(s.col) *= sc;
    }

    if ((t + 1) % record_every == 0)
      result.trace.push_back(evaluate_or_throw(obs, x, model, t, nullptr));
  }

  result.objective = evaluate_or_throw(obs, x, model, config.max_iters, nullptr);
  result.point = std::move(x);
  result.iterations = config.max_iters;
  return result;
}

namespace {

// Stationarity surrogate: norm of the projected-gradient mapping at eta.
double gradient_mapping_norm(const SolverConfig& config, const FactoredPoint& point,
                             const LossEvaluation& eval) {
  const double eta = 1e-6;
  auto [dU, dV] = factor_gradient(eval, point);
  FactoredPoint moved{point.U - eta * dU, point.V - eta * dV};
  moved = project_inf(project_factor_ball(std::move(moved), config.R), config.alpha);
  const double dist = std::sqrt((point.U - moved.U).squaredNorm() +
                                (point.V - moved.V).squaredNorm());
  return dist / eta;
}

// Probe for descent along random unit directions confined to the injected
// (last) column of each factor.
bool descent_in_new_column(const ObservationSet& obs, const LinkModel& model,
                           const SolverConfig& config, const FactoredPoint& point,
                           double base_value, Rng& rng) {
  const double step = 1e-3;
  const int kProbes = 20;
  const int last = point.k() - 1;
  for (int p = 0; p < kProbes; ++p) {
    Eigen::VectorXd du(point.d1()), dv(point.d2());
    for (Eigen::Index i = 0; i < du.size(); ++i) du[i] = rng.normal();
    for (Eigen::Index i = 0; i < dv.size(); ++i) dv[i] = rng.normal();
    const double nrm = std::sqrt(du.squaredNorm() + dv.squaredNorm());
    du /= nrm;
    dv /= nrm;
    FactoredPoint trial = point;
    trial.U.col(last) += step * du;
    trial.V.col(last) += step * dv;
    trial = project_inf(project_factor_ball(std::move(trial), config.R), config.alpha);
    try {
      if (average_loss(obs, trial, model).value < base_value - 1e-12) return true;
    } catch (const std::overflow_error&) {
      continue;
    }
  }
  return false;
}

}  // namespace

EscalationResult rank_escalation_solve(const ObservationSet& obs,
                                       const LinkModel& model,
                                       const SolverConfig& base_config, int k0,
                                       int k_max) {
  check_config(base_config);
  if (k0 < 1 || k0 > k_max)
    throw std::invalid_argument("rank_escalation_solve: need 1 <= k0 <= k_max");

  SolverConfig config = base_config;
  config.k = k0;
  SolveResult solve = pgd_solve(obs, model, config);
  Rng probe_rng(splitmix64(base_config.seed ^ 0x9e3779b9u));

  int k = k0;
  while (k < k_max) {
    // inject a zero column; U V^T is unchanged
    FactoredPoint injected{
        Eigen::MatrixXd::Zero(solve.point.d1(), k + 1),
        Eigen::MatrixXd::Zero(solve.point.d2(), k + 1)};
    injected.U.leftCols(k) = solve.point.U;
    injected.V.leftCols(k) = solve.point.V;

    SolverConfig next = base_config;
    next.k = k + 1;
    const LossEvaluation eval = average_loss(obs, injected, model);
    const double gnorm = gradient_mapping_norm(next, injected, eval);
    const bool stationary = gnorm <= 1e-4 * (1.0 + std::abs(eval.value));
    if (stationary &&
        !descent_in_new_column(obs, model, next, injected, eval.value, probe_rng))
      break;

    solve = pgd_solve(obs, model, next, injected);
    k = k + 1;
  }
  return EscalationResult{std::move(solve), k};
}

}  // namespace bitmc
