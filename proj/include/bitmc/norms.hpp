#pragma once

#include <Eigen/Dense>
#include <string>

#include "bitmc/factored_point.hpp"
#include "bitmc/sampling.hpp"

namespace bitmc {

// Exact max-norm needs an SDP, which this library does not attempt; it
// exposes a certificate (upper bound from a factorization) and the lower
// bound max(trace/sqrt(d1 d2), inf-norm) instead.
struct NormReport {
  double frobenius = 0.0;
  double inf_norm = 0.0;
  double trace_norm = 0.0;
  double maxnorm_upper = 0.0;
  double maxnorm_lower = 0.0;

  std::string to_json() const;
};

double inf_norm(const Eigen::MatrixXd& M);

// sqrt(sum_kl pi_kl M_kl^2)
double weighted_frobenius(const Eigen::MatrixXd& M, const SamplingDistribution& dist);

// Sum of singular values.
double trace_norm(const Eigen::MatrixXd& M);

// trace norm of diag(sqrt(row_marg)) M diag(sqrt(col_marg)).
double weighted_trace_norm(const Eigen::MatrixXd& M,
                           const Eigen::VectorXd& row_marg,
                           const Eigen::VectorXd& col_marg);

// Largest row l2-norm of A.
double max_row_norm(const Eigen::MatrixXd& A);

// ||U||_{2,inf} ||V||_{2,inf}, an upper bound on ||U V^T||_max.
double maxnorm_certificate(const FactoredPoint& point);

// max(||M||_* / sqrt(d1 d2), ||M||_inf), both valid lower bounds.
double maxnorm_lower_bound(const Eigen::MatrixXd& M);

// Balanced SVD factorization M = (U sqrt(S)) (V sqrt(S))^T, whose
// certificate is a usable max-norm upper bound for an unfactored matrix.
FactoredPoint balanced_svd_factorization(const Eigen::MatrixXd& M);

// Singular values below 1e-12 * sigma_max count as zero.
int numerical_rank(const Eigen::MatrixXd& M);

NormReport norm_report(const Eigen::MatrixXd& M);
NormReport norm_report(const Eigen::MatrixXd& M, const FactoredPoint& point);

}  // namespace bitmc
