#pragma once

#include <Eigen/Dense>

#include "bitmc/factored_point.hpp"
#include "bitmc/rng.hpp"

namespace bitmc {

// Target matrix together with the factorization it was built from; the
// factorization's max-norm certificate is what experiment configs use to
// set the solver radius.
struct Truth {
  Eigen::MatrixXd M;
  FactoredPoint natural;
};

enum class TruthNormalization { InfNormOne, FrobPerDimOne };

// Rank-2 d x d matrix with both nonzero singular values equal to
// scale * d / sqrt(2), so ||M||_F / d = scale.  Singular vectors come from
// orthonormalized seeded Gaussian draws.
Truth make_truth_spectral(int d, double scale, Rng& rng);

// M = L R^T with i.i.d. Uniform[-1/2, 1/2] factor entries, rescaled so
// ||M||_inf = 1 or ||M||_F / d1 = 1.
Truth make_truth_uniform_factor(int d1, int d2, int r,
                                TruthNormalization normalization, Rng& rng);

}  // namespace bitmc
