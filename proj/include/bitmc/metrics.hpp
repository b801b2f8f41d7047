#pragma once

#include <Eigen/Dense>

#include "bitmc/link_model.hpp"
#include "bitmc/sampling.hpp"

namespace bitmc {

// Mean squared Hellinger distance between two probability matrices:
// (1/(d1 d2)) sum [(sqrt p - sqrt q)^2 + (sqrt(1-p) - sqrt(1-q))^2].
double hellinger_sq(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q);

// Mean KL divergence with the 0 log 0 = 0 convention; returns +infinity
// when some q is 0 or 1 with a mismatched p.
double kl_divergence(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q);

// inf_{|x|<=alpha} (F')^2 / (8 F (1-F)) = 1 / (8 beta_alpha): the constant
// turning squared Hellinger distance into a squared-difference lower bound.
double lemma2_coefficient(const LinkModel& model, double alpha);

struct RecoveryErrors {
  double weighted_frob_sq = 0.0;  // ||e||_Pi^2
  double rel_frob_sq = 0.0;       // ||e||_F^2 / ||truth||_F^2
  double per_dim_frob_sq = 0.0;   // ||e||_F^2 / (d1 d2)
  bool rel_flagged = false;       // truth was identically zero
};

RecoveryErrors recovery_errors(const Eigen::MatrixXd& estimate,
                               const Eigen::MatrixXd& truth,
                               const SamplingDistribution& dist);

}  // namespace bitmc
