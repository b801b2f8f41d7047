#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "bitmc/link_model.hpp"
#include "bitmc/rng.hpp"

using namespace bitmc;

namespace {
// independent high-precision normal cdf for oracle values
double phi_oracle(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }
}  // namespace

TEST_CASE("link cdf values") {
  CHECK(eval_F(LinkModel::logistic(), 0.0) == doctest::Approx(0.5));
  CHECK(eval_F(LinkModel::laplace(1.0), 0.0) == doctest::Approx(0.5));
  CHECK(eval_F(LinkModel::probit(1.0), 1.0) == doctest::Approx(phi_oracle(1.0)).epsilon(1e-12));
  CHECK(eval_F(LinkModel::probit(1.0), 1.0) == doctest::Approx(0.841345).epsilon(1e-5));

  // nondecreasing, strictly inside (0,1) at moderate arguments
  for (const auto& m : {LinkModel::logistic(), LinkModel::probit(1.0), LinkModel::laplace(2.0)}) {
    double prev = 0.0;
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double f = eval_F(m, x);
      CHECK(f > 0.0);
      CHECK(f < 1.0);
      CHECK(f >= prev);
      prev = f;
    }
  }
  // deep in the tail the cdf may round to 1 exactly; the log-domain
  // evaluators are the ones required to stay finite there
  CHECK(eval_F(LinkModel::probit(0.5), 5.0) <= 1.0);
  CHECK(std::isfinite(log_1mF(LinkModel::probit(0.5), 5.0)));

  CHECK_THROWS_AS(eval_F(LinkModel::logistic(), std::nan("")), std::domain_error);
  CHECK_THROWS_AS(eval_F(LinkModel::logistic(), INFINITY), std::domain_error);
}

TEST_CASE("link density values") {
  CHECK(eval_dF(LinkModel::logistic(), 0.0) == doctest::Approx(0.25));
  CHECK(eval_dF(LinkModel::laplace(2.0), 0.0) == doctest::Approx(0.25));
  CHECK(eval_dF(LinkModel::probit(1.0), 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * 3.14159265358979323846)));
  CHECK_THROWS_AS(eval_dF(LinkModel::probit(1.0), std::nan("")), std::domain_error);
}

TEST_CASE("log-domain evaluation stays accurate in the tails") {
  const LinkModel probit = LinkModel::probit(1.0);
  // moderate values agree with direct log
  for (double x : {-3.0, -0.5, 0.0, 1.7}) {
    CHECK(log_F(probit, x) == doctest::Approx(std::log(eval_F(probit, x))).epsilon(1e-12));
    CHECK(log_1mF(probit, x) ==
          doctest::Approx(std::log1p(-eval_F(probit, x))).epsilon(1e-12));
  }
  // deep tail: compare against the two-term asymptotic expansion
  const double z = -40.0;
  const double asym = -0.5 * z * z - std::log(-z * std::sqrt(2.0 * 3.14159265358979323846));
  CHECK(log_F(probit, z) == doctest::Approx(asym).epsilon(1e-3));
  // hazard ratio grows like |z| in the left tail
  CHECK(ratio_dF_F(probit, z) == doctest::Approx(40.0).epsilon(0.01));
  CHECK(ratio_dF_1mF(probit, -z) == doctest::Approx(40.0).epsilon(0.01));
}

TEST_CASE("condition constants: logistic closed forms") {
  const LinkModel m = LinkModel::logistic();
  CHECK(l_alpha(m, 1.0) == 1.0);
  CHECK(beta_alpha(m, 0.0) == doctest::Approx(4.0));
  const double e = std::exp(1.0);
  CHECK(beta_alpha(m, 1.0) == doctest::Approx((1.0 + e) * (1.0 + e) / e).epsilon(1e-10));
  CHECK(u_alpha(m, 0.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));
  CHECK(u_alpha(m, 2.0) == doctest::Approx(2.0 * std::log(e + 1.0 / e)).epsilon(1e-10));
}

TEST_CASE("condition constants: laplace closed forms") {
  CHECK(l_alpha(LinkModel::laplace(1.0), 1.0) == doctest::Approx(2.0));
  CHECK(beta_alpha(LinkModel::laplace(1.0), 1.0) ==
        doctest::Approx(2.0 * std::exp(1.0) - 1.0).epsilon(1e-10));
  // general b: cross-check against the grid supremum
  for (double b : {0.5, 1.0, 3.0})
    for (double a : {0.5, 1.0, 2.0}) {
      const LinkModel m = LinkModel::laplace(b);
      CHECK(beta_alpha(m, a) == doctest::Approx(beta_alpha_grid(m, a)).epsilon(1e-4));
      CHECK(l_alpha(m, a) == doctest::Approx(l_alpha_grid(m, a)).epsilon(1e-4));
      CHECK(u_alpha(m, a) == doctest::Approx(u_alpha_grid(m, a)).epsilon(1e-4));
      // the stated magnitude bound for U_alpha
      CHECK(u_alpha(m, a) <= 2.0 * (a / b + std::log(2.0)) + 1e-12);
    }
}

TEST_CASE("condition constants: probit grid suprema satisfy the one-sided bounds") {
  for (double sigma : {0.5, 1.0, 2.0})
    for (double a : {0.5, 1.0, 2.0}) {
      const LinkModel m = LinkModel::probit(sigma);
      CHECK(l_alpha(m, a) <= 4.0 / sigma * (a / sigma + 1.0) + 1e-9);
      CHECK(beta_alpha(m, a) <=
            3.14159265358979323846 * sigma * sigma * std::exp(a * a / (2.0 * sigma * sigma)) +
                1e-9);
      CHECK(u_alpha(m, a) <= (a / sigma + 1.0) * (a / sigma + 1.0) + 1e-9);
    }
}

TEST_CASE("condition constants bound the integrands pointwise") {
  Rng rng(7);
  const double alpha = 1.3;
  for (const auto& m :
       {LinkModel::logistic(), LinkModel::probit(0.8), LinkModel::laplace(1.4)}) {
    const double L = l_alpha(m, alpha);
    const double B = beta_alpha(m, alpha);
    const double U = u_alpha(m, alpha);
    for (int t = 0; t < 1000; ++t) {
      const double x = rng.uniform(-alpha, alpha);
      const double f = eval_F(m, x);
      const double df = eval_dF(m, x);
      CHECK(df / (f * (1.0 - f)) <= L * (1.0 + 1e-8));
      CHECK(f * (1.0 - f) / (df * df) <= B * (1.0 + 1e-8));
      CHECK(-std::log(f * (1.0 - f)) <= U * (1.0 + 1e-8));
    }
  }
}

TEST_CASE("condition constants are monotone in alpha") {
  for (const auto& m :
       {LinkModel::logistic(), LinkModel::probit(1.0), LinkModel::laplace(1.0)}) {
    double prev_l = 0.0, prev_b = 0.0, prev_u = 0.0;
    for (double a : {0.1, 0.5, 1.0, 2.0, 3.0}) {
      CHECK(l_alpha(m, a) >= prev_l - 1e-12);
      CHECK(beta_alpha(m, a) >= prev_b - 1e-12);
      CHECK(u_alpha(m, a) >= prev_u - 1e-12);
      prev_l = l_alpha(m, a);
      prev_b = beta_alpha(m, a);
      prev_u = u_alpha(m, a);
    }
  }
}

TEST_CASE("custom models require both evaluators and nonvanishing F") {
  CHECK_THROWS_AS(LinkModel::custom(nullptr, nullptr), std::invalid_argument);
  // a link that saturates inside [-alpha, alpha] violates the regularity check
  auto saturating = LinkModel::custom([](double x) { return x < 0.0 ? 0.0 : 1.0; },
                                      [](double) { return 0.0; });
  CHECK_THROWS_AS(l_alpha(saturating, 1.0), std::runtime_error);
}
