#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "bitmc/link_model.hpp"
#include "bitmc/rng.hpp"

namespace bitmc {

struct IndexPair {
  int row = 0;
  int col = 0;
  bool operator==(const IndexPair&) const = default;
};

// A probability distribution Pi = {pi_kl} over index pairs of a d1 x d2
// matrix.  Entries are nonnegative and sum to one (checked to 1e-10).
struct SamplingDistribution {
  int d1 = 0;
  int d2 = 0;
  Eigen::MatrixXd probs;

  Eigen::VectorXd row_marginals() const { return probs.rowwise().sum(); }
  Eigen::VectorXd col_marginals() const { return probs.colwise().sum().transpose(); }
};

struct Observation {
  int row = 0;
  int col = 0;
  int sign = 0;  // +1 or -1
};

// Multiset of binary samples; duplicates are allowed (with-replacement
// semantics), each carrying an independently drawn sign.
struct ObservationSet {
  int d1 = 0;
  int d2 = 0;
  std::vector<Observation> samples;
};

SamplingDistribution make_distribution(int d1, int d2, Eigen::MatrixXd probs);
SamplingDistribution uniform_sampling(int d1, int d2);

// pi_kl proportional to row_weights[k] * col_weights[l].
SamplingDistribution product_marginals(const Eigen::VectorXd& row_weights,
                                       const Eigen::VectorXd& col_weights);

// mu = 1 / (d1 d2 min_kl pi_kl); +infinity when some cell has mass zero.
double mu_condition(const SamplingDistribution& dist);

std::vector<IndexPair> draw_with_replacement(const SamplingDistribution& dist,
                                             int n, Rng& rng);

// n distinct cells, drawn sequentially from Pi with rejection of repeats.
std::vector<IndexPair> draw_without_replacement(const SamplingDistribution& dist,
                                                int n, Rng& rng);

// Emits +1 with probability F(truth(i,j)) independently per list entry.
ObservationSet generate_observations(const Eigen::MatrixXd& truth,
                                     const LinkModel& model,
                                     const std::vector<IndexPair>& indices,
                                     Rng& rng);

// (row marginal, column marginal) of the observed index multiset.
std::pair<Eigen::VectorXd, Eigen::VectorXd> empirical_marginals(
    const ObservationSet& obs);

// Smoothed: halfway between the empirical marginal and uniform.
std::pair<Eigen::VectorXd, Eigen::VectorXd> smoothed_empirical_marginals(
    const ObservationSet& obs);

// CSV with header "row,col,sign"; indices are 1-based on disk.
void write_csv(const ObservationSet& obs, std::ostream& out);
ObservationSet read_observations_csv(std::istream& in, int d1, int d2);

// Dense grid of probabilities, one matrix row per line.
void write_csv(const SamplingDistribution& dist, std::ostream& out);

}  // namespace bitmc
