#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bitmc/factored_point.hpp"
#include "bitmc/link_model.hpp"
#include "bitmc/objective.hpp"
#include "bitmc/sampling.hpp"

namespace bitmc {

enum class SolverMode { FullGradient, Stochastic };

struct SolverConfig {
  double tau = 1.0;       // step scale; iteration t uses tau / sqrt(t+1)
  int max_iters = 500;
  double tol = 1e-6;      // relative decrease over a 10-iteration window
  int k = 1;
  double R = 1.0;         // squared row norms of U, V stay <= R
  double alpha = 1.0;     // entrywise bound on U V^T
  SolverMode mode = SolverMode::FullGradient;
  std::uint64_t seed = 0;
};

struct SolverError : std::runtime_error {
  SolverError(const std::string& what, int iteration_index)
      : std::runtime_error(what), iteration(iteration_index) {}
  int iteration;
};

struct SolveResult {
  FactoredPoint point;
  std::vector<double> trace;  // objective per recorded iterate
  double objective = 0.0;     // objective of the returned point
  int iterations = 0;
};

// Rows of U and V whose squared l2-norm exceeds R are rescaled onto the
// sphere of radius sqrt(R); feasible rows are returned bit-identical.
FactoredPoint project_factor_ball(FactoredPoint point, double R);

// If ||U V^T||_inf = m > alpha, both factors are scaled by sqrt(alpha/m),
// so the product lands exactly on the inf-norm boundary.
FactoredPoint project_inf(FactoredPoint point, double alpha);

// Feasible start: i.i.d. uniform entries on 0.5 * [-sqrt(R/k), sqrt(R/k)],
// then projected.  Large enough to escape the saddle at the origin, where
// the bilinear gradient vanishes.
FactoredPoint initial_point(int d1, int d2, const SolverConfig& config);

// Projected gradient descent on the factors; returns the best-objective
// feasible iterate seen, not necessarily the last one.
SolveResult pgd_solve(const ObservationSet& obs, const LinkModel& model,
                      const SolverConfig& config,
                      std::optional<FactoredPoint> warm_start = std::nullopt);

// Stochastic variant: one sampled observation per iteration, touching only
// the two incident factor rows.
SolveResult sgd_solve(const ObservationSet& obs, const LinkModel& model,
                      const SolverConfig& config,
                      std::optional<FactoredPoint> warm_start = std::nullopt);

struct EscalationResult {
  SolveResult solve;
  int k_used = 0;
};

// Solve at k0, inject a zero column, and grow k until the injected point
// passes a local-minimality test or k reaches k_max.
EscalationResult rank_escalation_solve(const ObservationSet& obs,
                                       const LinkModel& model,
                                       const SolverConfig& base_config, int k0,
                                       int k_max);

}  // namespace bitmc
