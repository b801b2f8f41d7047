#pragma once

#include <string>

#include "bitmc/sampling.hpp"
#include "bitmc/solver.hpp"

namespace bitmc {

enum class EstimatorKind { MaxNorm, WeightedTrace };
enum class MarginalsSource { True, Empirical, SmoothedEmpirical };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::MaxNorm;
  double alpha = 1.0;   // entrywise bound
  double radius = 1.0;  // R for max-norm; alpha*sqrt(r) budget for weighted-trace
  MarginalsSource marginals_source = MarginalsSource::True;  // weighted-trace only
  SolverConfig solver;
  bool use_rank_escalation = false;
  int k0 = 1;
  int k_max = 1;
};

struct Diagnostics {
  double objective = 0.0;
  int k_used = 0;
  int iterations = 0;

  std::string to_json() const;
};

struct EstimateResult {
  Eigen::MatrixXd estimate;
  FactoredPoint point;
  Diagnostics diag;
  std::vector<double> trace;  // objective per recorded solver iterate
};

// Maximum likelihood over K_max(alpha, radius), via factored projected
// gradient descent (fixed k or rank escalation per the spec).
EstimateResult max_norm_mle(const ObservationSet& obs, const LinkModel& model,
                            const EstimatorSpec& spec);

// Maximum likelihood with the weighted trace-norm budget enforced through
// the factored surrogate (||U_w||_F^2 + ||V_w||_F^2)/2 <= radius, restored
// by a global rescale, plus the entrywise alpha clip.  `dist` supplies true
// marginals and may be null for the empirical sources.
EstimateResult weighted_trace_mle(const ObservationSet& obs, const LinkModel& model,
                                  const EstimatorSpec& spec,
                                  const SamplingDistribution* dist);

}  // namespace bitmc
