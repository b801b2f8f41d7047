#pragma once

#include <functional>

namespace bitmc {

enum class LinkKind { Logistic, Probit, Laplace, Custom };

// The sign-observation link: F is the cdf of the negated noise, so an
// entry with value x is observed as +1 with probability F(x).  Values are
// immutable after construction; all evaluators are pure.
struct LinkModel {
  LinkKind kind = LinkKind::Logistic;
  double scale = 1.0;  // sigma for Probit, b for Laplace; unused otherwise
  std::function<double(double)> custom_F;
  std::function<double(double)> custom_dF;

  static LinkModel logistic();
  static LinkModel probit(double sigma);
  static LinkModel laplace(double b);
  static LinkModel custom(std::function<double(double)> F,
                          std::function<double(double)> dF);
};

// F(x); mathematically in (0,1) for the built-in models, though the probit
// tail rounds to 0 or 1 in doubles beyond |x/sigma| ~ 8 (use the log-domain
// evaluators there).
double eval_F(const LinkModel& model, double x);

// F'(x) >= 0.
double eval_dF(const LinkModel& model, double x);

// log F(x) and log(1-F(x)), evaluated in the log domain so that large
// |x| (probit tails in particular) keeps full precision.
double log_F(const LinkModel& model, double x);
double log_1mF(const LinkModel& model, double x);

// Hazard-type ratios F'(x)/F(x) and F'(x)/(1-F(x)), stable in the tails.
double ratio_dF_F(const LinkModel& model, double x);
double ratio_dF_1mF(const LinkModel& model, double x);

// The likelihood regularity constants over [-alpha, alpha]:
//   L_alpha    = sup |F'| / (F (1-F))
//   beta_alpha = sup F (1-F) / (F')^2
//   U_alpha    = sup log(1 / (F (1-F)))
// Closed forms are used where available (logistic, Laplace); otherwise the
// supremum is taken over a uniform grid of 10^5+1 points.
double l_alpha(const LinkModel& model, double alpha);
double beta_alpha(const LinkModel& model, double alpha);
double u_alpha(const LinkModel& model, double alpha);

// Grid-supremum fallbacks, exposed so closed forms can be cross-checked.
double l_alpha_grid(const LinkModel& model, double alpha);
double beta_alpha_grid(const LinkModel& model, double alpha);
double u_alpha_grid(const LinkModel& model, double alpha);

// Scaled complementary error function exp(t^2) erfc(t), finite for all t.
double erfcx(double t);

// log Phi(z) for the standard normal cdf, accurate far into the left tail.
double log_ndtr(double z);

}  // namespace bitmc
