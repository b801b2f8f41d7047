#include "bitmc/verify.hpp"

#include <cmath>
#include <ostream>

#include "bitmc/link_model.hpp"
#include "bitmc/metrics.hpp"
#include "bitmc/norms.hpp"
#include "bitmc/rng.hpp"
#include "bitmc/solver.hpp"

namespace bitmc {

namespace {

constexpr double kSlack = 1e-12;

Eigen::MatrixXd random_matrix(int r, int c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = rng.uniform(lo, hi);
  return M;
}

bool check_norm_chain(Rng& rng) {
  for (int t = 0; t < 300; ++t) {
    const int d1 = 2 + static_cast<int>(rng.below(8));
    const int d2 = 2 + static_cast<int>(rng.below(8));
    const int r = 1 + static_cast<int>(rng.below(std::min(d1, d2)));
    const Eigen::MatrixXd M = random_matrix(d1, r, rng) * random_matrix(r, d2, rng);
    const double fro = M.norm();
    const double tr = trace_norm(M);
    if (tr < fro - kSlack) return false;
    if (tr > std::sqrt(static_cast<double>(numerical_rank(M))) * fro + 1e-9) return false;
  }
  return true;
}

bool check_maxnorm_bounds(Rng& rng) {
  for (int t = 0; t < 300; ++t) {
    const int d1 = 2 + static_cast<int>(rng.below(8));
    const int d2 = 2 + static_cast<int>(rng.below(8));
    const int k = 1 + static_cast<int>(rng.below(4));
    const FactoredPoint p{random_matrix(d1, k, rng), random_matrix(d2, k, rng)};
    const Eigen::MatrixXd M = p.product();
    const double cert = maxnorm_certificate(p);
    if (inf_norm(M) > cert + kSlack) return false;
    if (maxnorm_lower_bound(M) > cert + kSlack) return false;
  }
  return true;
}

bool check_divergences(Rng& rng) {
  for (int t = 0; t < 300; ++t) {
    const int d1 = 1 + static_cast<int>(rng.below(6));
    const int d2 = 1 + static_cast<int>(rng.below(6));
    const Eigen::MatrixXd P = random_matrix(d1, d2, rng, 0.01, 0.99);
    const Eigen::MatrixXd Q = random_matrix(d1, d2, rng, 0.01, 0.99);
    if (hellinger_sq(P, Q) > kl_divergence(P, Q) + kSlack) return false;
  }
  return true;
}

bool check_lemma2(Rng& rng) {
  const LinkModel models[] = {LinkModel::logistic(), LinkModel::probit(1.0),
                              LinkModel::laplace(1.0)};
  const double alpha = 1.5;
  for (const auto& model : models) {
    const double coeff = lemma2_coefficient(model, alpha);
    for (int t = 0; t < 300; ++t) {
      const double s = rng.uniform(-alpha, alpha);
      const double x = rng.uniform(-alpha, alpha);
      const Eigen::MatrixXd Ps = Eigen::MatrixXd::Constant(1, 1, eval_F(model, s));
      const Eigen::MatrixXd Pt = Eigen::MatrixXd::Constant(1, 1, eval_F(model, x));
      if (hellinger_sq(Ps, Pt) < coeff * (s - x) * (s - x) - kSlack) return false;
    }
  }
  return true;
}

bool check_projections(Rng& rng) {
  for (int t = 0; t < 100; ++t) {
    const int d1 = 2 + static_cast<int>(rng.below(6));
    const int d2 = 2 + static_cast<int>(rng.below(6));
    const int k = 1 + static_cast<int>(rng.below(3));
    const double R = rng.uniform(0.1, 2.0);
    const double alpha = rng.uniform(0.1, 2.0);
    FactoredPoint p{random_matrix(d1, k, rng, -2, 2), random_matrix(d2, k, rng, -2, 2)};
    const FactoredPoint q = project_factor_ball(p, R);
    if (max_row_norm(q.U) * max_row_norm(q.U) > R + 1e-9) return false;
    if (max_row_norm(q.V) * max_row_norm(q.V) > R + 1e-9) return false;
    const FactoredPoint w = project_inf(q, alpha);
    if (inf_norm(w.product()) > alpha + 1e-9) return false;
  }
  return true;
}

bool check_closed_forms() {
  const double alphas[] = {0.25, 1.0, 2.0};
  for (double a : alphas) {
    const LinkModel lg = LinkModel::logistic();
    if (std::abs(l_alpha(lg, a) - l_alpha_grid(lg, a)) > 1e-4 * l_alpha(lg, a))
      return false;
    if (std::abs(beta_alpha(lg, a) - beta_alpha_grid(lg, a)) > 1e-4 * beta_alpha(lg, a))
      return false;
    const LinkModel lp = LinkModel::laplace(0.7);
    if (std::abs(beta_alpha(lp, a) - beta_alpha_grid(lp, a)) > 1e-4 * beta_alpha(lp, a))
      return false;
  }
  return true;
}

}  // namespace

bool run_verification(std::ostream& out, std::uint64_t seed) {
  Rng rng(seed);
  bool ok = true;
  const struct {
    const char* name;
    bool passed;
  } suites[] = {
      {"norm chain (frobenius <= trace <= sqrt(rank) frobenius)", check_norm_chain(rng)},
      {"max-norm certificate bounds", check_maxnorm_bounds(rng)},
      {"hellinger^2 <= KL", check_divergences(rng)},
      {"hellinger lower bound coefficient", check_lemma2(rng)},
      {"projection contracts", check_projections(rng)},
      {"closed forms vs grid suprema", check_closed_forms()},
  };
  for (const auto& s : suites) {
    out << (s.passed ? "PASS " : "FAIL ") << s.name << '\n';
    ok = ok && s.passed;
  }
  return ok;
}

}  // namespace bitmc
