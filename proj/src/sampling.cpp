#include "bitmc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace bitmc {

namespace {

void validate(const SamplingDistribution& dist) {
  if (dist.d1 < 1 || dist.d2 < 1)
    throw std::invalid_argument("sampling distribution: dimensions must be positive");
  if (dist.probs.rows() != dist.d1 || dist.probs.cols() != dist.d2)
    throw std::invalid_argument("sampling distribution: shape mismatch");
  if ((dist.probs.array() < 0.0).any())
    throw std::invalid_argument("sampling distribution: negative entry");
  if (std::abs(dist.probs.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("sampling distribution: entries must sum to 1");
}

// Flattened (row-major) cumulative sums for inverse-cdf sampling.
std::vector<double> cumulative(const SamplingDistribution& dist) {
  std::vector<double> cum;
  cum.reserve(static_cast<size_t>(dist.d1) * dist.d2);
  double acc = 0.0;
  for (int i = 0; i < dist.d1; ++i)
    for (int j = 0; j < dist.d2; ++j) {
      acc += dist.probs(i, j);
      cum.push_back(acc);
    }
  cum.back() = 1.0;
  return cum;
}

IndexPair unflatten(size_t idx, int d2) {
  return IndexPair{static_cast<int>(idx / d2), static_cast<int>(idx % d2)};
}

}  // namespace

SamplingDistribution make_distribution(int d1, int d2, Eigen::MatrixXd probs) {
  SamplingDistribution dist{d1, d2, std::move(probs)};
  validate(dist);
  return dist;
}

SamplingDistribution uniform_sampling(int d1, int d2) {
  if (d1 < 1 || d2 < 1)
    throw std::invalid_argument("uniform_sampling: dimensions must be positive");
  const double p = 1.0 / (static_cast<double>(d1) * d2);
  return SamplingDistribution{d1, d2, Eigen::MatrixXd::Constant(d1, d2, p)};
}

SamplingDistribution product_marginals(const Eigen::VectorXd& row_weights,
                                       const Eigen::VectorXd& col_weights) {
  if ((row_weights.array() < 0.0).any() || (col_weights.array() < 0.0).any())
    throw std::invalid_argument("product_marginals: weights must be nonnegative");
  const double rs = row_weights.sum();
  const double cs = col_weights.sum();
  if (!(rs > 0.0) || !(cs > 0.0))
    throw std::invalid_argument("product_marginals: all-zero weight vector");
  Eigen::MatrixXd probs = (row_weights / rs) * (col_weights / cs).transpose();
  return make_distribution(static_cast<int>(row_weights.size()),
                           static_cast<int>(col_weights.size()), std::move(probs));
}

double mu_condition(const SamplingDistribution& dist) {
  validate(dist);
  const double min_p = dist.probs.minCoeff();
  if (min_p <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (static_cast<double>(dist.d1) * dist.d2 * min_p);
}

std::vector<IndexPair> draw_with_replacement(const SamplingDistribution& dist,
                                             int n, Rng& rng) {
  validate(dist);
  if (n < 1) throw std::invalid_argument("draw_with_replacement: n must be >= 1");
  const auto cum = cumulative(dist);
  std::vector<IndexPair> out;
  out.reserve(n);
  for (int t = 0; t < n; ++t) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    out.push_back(unflatten(static_cast<size_t>(it - cum.begin()), dist.d2));
  }
  return out;
}

std::vector<IndexPair> draw_without_replacement(const SamplingDistribution& dist,
                                                int n, Rng& rng) {
  validate(dist);
  if (n < 1) throw std::invalid_argument("draw_without_replacement: n must be >= 1");
  const int support = static_cast<int>((dist.probs.array() > 0.0).count());
  if (n > support)
    throw std::invalid_argument("draw_without_replacement: n exceeds support size");
  const auto cum = cumulative(dist);
  std::unordered_set<size_t> seen;
  std::vector<IndexPair> out;
  out.reserve(n);
  while (static_cast<int>(out.size()) < n) {
    const double u = rng.uniform();
    const size_t idx =
        static_cast<size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (seen.insert(idx).second) out.push_back(unflatten(idx, dist.d2));
  }
  return out;
}

ObservationSet generate_observations(const Eigen::MatrixXd& truth,
                                     const LinkModel& model,
                                     const std::vector<IndexPair>& indices,
                                     Rng& rng) {
  if (!truth.allFinite())
    throw std::invalid_argument("generate_observations: truth has non-finite entries");
  ObservationSet obs;
  obs.d1 = static_cast<int>(truth.rows());
  obs.d2 = static_cast<int>(truth.cols());
  obs.samples.reserve(indices.size());
  for (const auto& [i, j] : indices) {
    if (i < 0 || i >= obs.d1 || j < 0 || j >= obs.d2)
      throw std::invalid_argument("generate_observations: index out of range");
    const double p = eval_F(model, truth(i, j));
    obs.samples.push_back({i, j, rng.uniform() < p ? +1 : -1});
  }
  return obs;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> empirical_marginals(
    const ObservationSet& obs) {
  if (obs.samples.empty())
    throw std::invalid_argument("empirical_marginals: empty observation set");
  Eigen::VectorXd row = Eigen::VectorXd::Zero(obs.d1);
  Eigen::VectorXd col = Eigen::VectorXd::Zero(obs.d2);
  for (const auto& s : obs.samples) {
    row[s.row] += 1.0;
    col[s.col] += 1.0;
  }
  const double n = static_cast<double>(obs.samples.size());
  return {row / n, col / n};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> smoothed_empirical_marginals(
    const ObservationSet& obs) {
  auto [row, col] = empirical_marginals(obs);
  row = 0.5 * (row.array() + 1.0 / obs.d1);
  col = 0.5 * (col.array() + 1.0 / obs.d2);
  return {row, col};
}

void write_csv(const ObservationSet& obs, std::ostream& out) {
  out << "row,col,sign\n";
  for (const auto& s : obs.samples)
    out << s.row + 1 << ',' << s.col + 1 << ',' << s.sign << '\n';
}

ObservationSet read_observations_csv(std::istream& in, int d1, int d2) {
  ObservationSet obs{d1, d2, {}};
  std::string line;
  if (!std::getline(in, line) || line.rfind("row,col,sign", 0) != 0)
    throw std::runtime_error("observation csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int r, c, s;
    char comma;
    if (!(ls >> r >> comma >> c >> comma >> s))
      throw std::runtime_error("observation csv: malformed row");
    if (r < 1 || r > d1 || c < 1 || c > d2 || (s != 1 && s != -1))
      throw std::runtime_error("observation csv: out-of-range row");
    obs.samples.push_back({r - 1, c - 1, s});
  }
  return obs;
}

void write_csv(const SamplingDistribution& dist, std::ostream& out) {
  for (int i = 0; i < dist.d1; ++i) {
    for (int j = 0; j < dist.d2; ++j) {
      if (j) out << ',';
      out << dist.probs(i, j);
    }
    out << '\n';
  }
}

}  // namespace bitmc
