#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bitmc/estimators.hpp"
#include "bitmc/metrics.hpp"
#include "bitmc/truth.hpp"

namespace bitmc {

enum class TruthKind { SpectralRankTwo, UniformFactor };

struct ModelSpec {
  LinkKind kind = LinkKind::Logistic;
  double scale = 1.0;
  // "fixed" uses `scale` as-is; "half_alpha" resolves to ||truth||_inf / 2
  std::string scale_rule = "fixed";
};

struct SamplingSpec {
  enum class Kind { Uniform, Product } kind = Kind::Uniform;
  Eigen::VectorXd row_weights;  // Product only
  Eigen::VectorXd col_weights;
  bool with_replacement = true;
};

// One estimator column of the experiment grid.
struct EstimatorSetup {
  std::string name = "max_norm";
  EstimatorKind kind = EstimatorKind::MaxNorm;
  MarginalsSource marginals_source = MarginalsSource::True;
  // alpha: <= 0 means "use ||truth||_inf"
  double alpha = 0.0;
  // radius: <= 0 means the default rule (1.1 x certificate of the truth's
  // natural factorization for max-norm; alpha sqrt(rank) for weighted-trace)
  double radius = 0.0;
  SolverConfig solver;
  bool use_rank_escalation = false;
  int k0 = 1;
  int k_max = 1;
};

struct ExperimentSpec {
  std::string name = "experiment";
  int d1 = 0;
  int d2 = 0;
  int rank = 2;
  TruthKind truth_kind = TruthKind::SpectralRankTwo;
  TruthNormalization normalization = TruthNormalization::FrobPerDimOne;
  ModelSpec model;
  SamplingSpec sampling;
  std::vector<int> sample_sizes;
  std::vector<double> sigma_grid;  // optional; overrides model.scale per point
  std::vector<EstimatorSetup> estimators;
  int repetitions = 1;
  std::uint64_t seed = 0;
};

struct ResultRow {
  std::string experiment;
  int d1 = 0, d2 = 0, rank = 0;
  double sigma = 0.0;
  int n = 0;
  std::string estimator;
  int repetition = 0;
  std::uint64_t seed = 0;
  double per_dim_frob_sq = 0.0;
  double rel_frob_sq = 0.0;
  double weighted_frob_sq = 0.0;
  double objective = 0.0;
  int k_used = 0;
  double wall_ms = 0.0;
  std::string error;  // empty on success
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // data rows only, in emission order
  std::string csv;              // results.csv content (deterministic)
  std::string timings_csv;      // per-row wall time, kept out of results.csv
  std::vector<std::pair<std::string, std::vector<double>>> traces;
};

// Runs the full grid: (sample size x sigma x estimator x repetition).
// All randomness flows from spec.seed through named child streams, so the
// returned csv text is byte-identical across runs of the same spec.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                bool collect_traces = false);

ExperimentSpec parse_experiment_json(const std::string& text);
std::string echo_config_json(const ExperimentSpec& spec);

// Dense matrix CSV (one row per line, comma separated, no header).
Eigen::MatrixXd read_matrix_csv(std::istream& in);
void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& out);

}  // namespace bitmc
