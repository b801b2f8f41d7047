#include "bitmc/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bitmc/norms.hpp"

namespace bitmc {

namespace {

void check_prob_matrix(const Eigen::MatrixXd& P) {
  if ((P.array() < 0.0).any() || (P.array() > 1.0).any())
    throw std::invalid_argument("metrics: entries must lie in [0, 1]");
}

void check_same_shape(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
  if (P.rows() != Q.rows() || P.cols() != Q.cols())
    throw std::invalid_argument("metrics: dimension mismatch");
}

// p log(p/q) with 0 log 0 = 0; +inf when q forbids p.
double kl_term(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return p * std::log(p / q);
}

}  // namespace

double hellinger_sq(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
  check_same_shape(P, Q);
  check_prob_matrix(P);
  check_prob_matrix(Q);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < P.cols(); ++j)
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      const double a = std::sqrt(P(i, j)) - std::sqrt(Q(i, j));
      const double b = std::sqrt(1.0 - P(i, j)) - std::sqrt(1.0 - Q(i, j));
      sum += a * a + b * b;
    }
  return sum / (static_cast<double>(P.rows()) * P.cols());
}

double kl_divergence(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
  check_same_shape(P, Q);
  check_prob_matrix(P);
  check_prob_matrix(Q);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < P.cols(); ++j)
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      sum += kl_term(P(i, j), Q(i, j)) + kl_term(1.0 - P(i, j), 1.0 - Q(i, j));
      if (std::isinf(sum)) return sum;
    }
  return sum / (static_cast<double>(P.rows()) * P.cols());
}

double lemma2_coefficient(const LinkModel& model, double alpha) {
  return 1.0 / (8.0 * beta_alpha(model, alpha));
}

RecoveryErrors recovery_errors(const Eigen::MatrixXd& estimate,
                               const Eigen::MatrixXd& truth,
                               const SamplingDistribution& dist) {
  check_same_shape(estimate, truth);
  const Eigen::MatrixXd err = estimate - truth;
  RecoveryErrors out;
  const double wf = weighted_frobenius(err, dist);
  out.weighted_frob_sq = wf * wf;
  const double err_sq = err.squaredNorm();
  out.per_dim_frob_sq = err_sq / (static_cast<double>(truth.rows()) * truth.cols());
  const double truth_sq = truth.squaredNorm();
  if (truth_sq == 0.0) {
    out.rel_flagged = true;
    out.rel_frob_sq = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.rel_frob_sq = err_sq / truth_sq;
  }
  return out;
}

}  // namespace bitmc
