#include "bitmc/truth.hpp"

#include <cmath>
#include <stdexcept>

#include "bitmc/norms.hpp"

namespace bitmc {

namespace {

Eigen::VectorXd gaussian_vector(int d, Rng& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  return v;
}

// Two orthonormal columns via Gram-Schmidt on Gaussian draws.
Eigen::MatrixXd orthonormal_pair(int d, Rng& rng) {
  Eigen::MatrixXd Q(d, 2);
  Eigen::VectorXd a = gaussian_vector(d, rng);
  Q.col(0) = a / a.norm();
  Eigen::VectorXd b = gaussian_vector(d, rng);
  b -= Q.col(0).dot(b) * Q.col(0);
  Q.col(1) = b / b.norm();
  return Q;
}

}  // namespace

Truth make_truth_spectral(int d, double scale, Rng& rng) {
  if (d < 2) throw std::invalid_argument("make_truth_spectral: d must be >= 2");
  if (!(scale > 0.0)) throw std::invalid_argument("make_truth_spectral: scale must be > 0");
  const double sv = scale * d / std::sqrt(2.0);
  const Eigen::MatrixXd Qu = orthonormal_pair(d, rng);
  const Eigen::MatrixXd Qv = orthonormal_pair(d, rng);
  Truth t;
  t.natural = FactoredPoint{std::sqrt(sv) * Qu, std::sqrt(sv) * Qv};
  t.M = t.natural.product();
  return t;
}

Truth make_truth_uniform_factor(int d1, int d2, int r,
                                TruthNormalization normalization, Rng& rng) {
  if (r < 1 || r > std::min(d1, d2))
    throw std::invalid_argument("make_truth_uniform_factor: need 1 <= r <= min(d1, d2)");
  Eigen::MatrixXd L(d1, r), R(d2, r);
  Eigen::MatrixXd M;
  double norm = 0.0;
  do {
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < r; ++j) L(i, j) = rng.uniform(-0.5, 0.5);
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < r; ++j) R(i, j) = rng.uniform(-0.5, 0.5);
    M = L * R.transpose();
    norm = normalization == TruthNormalization::InfNormOne ? inf_norm(M)
                                                           : M.norm() / d1;
  } while (norm == 0.0);  // all-zero draws have probability 0 but redraw anyway
  const double c = 1.0 / norm;
  Truth t;
  t.natural = FactoredPoint{std::sqrt(c) * L, std::sqrt(c) * R};
  t.M = c * M;
  return t;
}

}  // namespace bitmc
