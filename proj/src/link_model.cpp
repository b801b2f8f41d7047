#include "bitmc/link_model.hpp"

#include <cmath>
#include <stdexcept>

namespace bitmc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kGridPoints = 100001;

void check_finite(double x) {
  if (!std::isfinite(x)) throw std::domain_error("link model: non-finite argument");
}

double logistic_F(double x) {
  // evaluate through exp(-|x|) so neither branch overflows
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logistic_dF(double x) {
  const double e = std::exp(-std::abs(x));
  const double d = 1.0 + e;
  return e / (d * d);
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

double erfcx(double t) {
  if (t < 0.0) {
    // erfcx(t) = 2 exp(t^2) - erfcx(-t); overflows to +inf for t << 0
    return 2.0 * std::exp(t * t) - erfcx(-t);
  }
  if (t <= 25.0) return std::exp(t * t) * std::erfc(t);
  // asymptotic series, relative error < 1e-14 for t > 25
  const double s = 1.0 / (t * t);
  return (1.0 - 0.5 * s + 0.75 * s * s - 1.875 * s * s * s) /
         (t * std::sqrt(kPi));
}

double log_ndtr(double z) {
  if (z >= -1.0) {
    if (z > 6.0) return std::log1p(-normal_cdf(-z));
    return std::log(normal_cdf(z));
  }
  const double t = -z / std::sqrt(2.0);
  return std::log(0.5) - t * t + std::log(erfcx(t));
}

LinkModel LinkModel::logistic() { return LinkModel{LinkKind::Logistic, 1.0, {}, {}}; }

LinkModel LinkModel::probit(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("probit: sigma must be positive");
  return LinkModel{LinkKind::Probit, sigma, {}, {}};
}

LinkModel LinkModel::laplace(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("laplace: b must be positive");
  return LinkModel{LinkKind::Laplace, b, {}, {}};
}

LinkModel LinkModel::custom(std::function<double(double)> F,
                            std::function<double(double)> dF) {
  if (!F || !dF)
    throw std::invalid_argument("custom link: both F and F' are required");
  return LinkModel{LinkKind::Custom, 1.0, std::move(F), std::move(dF)};
}

double eval_F(const LinkModel& model, double x) {
  check_finite(x);
  switch (model.kind) {
    case LinkKind::Logistic:
      return logistic_F(x);
    case LinkKind::Probit:
      return normal_cdf(x / model.scale);
    case LinkKind::Laplace:
      if (x < 0.0) return 0.5 * std::exp(x / model.scale);
      return 1.0 - 0.5 * std::exp(-x / model.scale);
    case LinkKind::Custom:
      return model.custom_F(x);
  }
  throw std::logic_error("unreachable");
}

double eval_dF(const LinkModel& model, double x) {
  check_finite(x);
  switch (model.kind) {
    case LinkKind::Logistic:
      return logistic_dF(x);
    case LinkKind::Probit:
      return normal_pdf(x / model.scale) / model.scale;
    case LinkKind::Laplace:
      return 0.5 / model.scale * std::exp(-std::abs(x) / model.scale);
    case LinkKind::Custom:
      return model.custom_dF(x);
  }
  throw std::logic_error("unreachable");
}

double log_F(const LinkModel& model, double x) {
  check_finite(x);
  switch (model.kind) {
    case LinkKind::Logistic:
      // log F = -log(1 + e^{-x})
      return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
    case LinkKind::Probit:
      return log_ndtr(x / model.scale);
    case LinkKind::Laplace:
      if (x < 0.0) return std::log(0.5) + x / model.scale;
      return std::log1p(-0.5 * std::exp(-x / model.scale));
    case LinkKind::Custom: {
      const double f = model.custom_F(x);
      if (!(f > 0.0))
        throw std::overflow_error("custom link: F(x) reached 0");
      return std::log(f);
    }
  }
  throw std::logic_error("unreachable");
}

double log_1mF(const LinkModel& model, double x) {
  check_finite(x);
  switch (model.kind) {
    case LinkKind::Logistic:
    case LinkKind::Probit:
    case LinkKind::Laplace:
      // the built-in links satisfy 1 - F(x) = F(-x)
      return log_F(model, -x);
    case LinkKind::Custom: {
      const double f = model.custom_F(x);
      if (!(f < 1.0))
        throw std::overflow_error("custom link: F(x) reached 1");
      return std::log1p(-f);
    }
  }
  throw std::logic_error("unreachable");
}

double ratio_dF_F(const LinkModel& model, double x) {
  check_finite(x);
  switch (model.kind) {
    case LinkKind::Logistic:
      // F'/F = 1 - F = F(-x)
      return logistic_F(-x);
    case LinkKind::Probit: {
      const double z = x / model.scale;
      if (z >= -1.0) return normal_pdf(z) / normal_cdf(z) / model.scale;
      // phi(z)/Phi(z) = sqrt(2/pi) / erfcx(-z/sqrt(2)) for z < 0
      return std::sqrt(2.0 / kPi) / erfcx(-z / std::sqrt(2.0)) / model.scale;
    }
    case LinkKind::Laplace:
      if (x < 0.0) return 1.0 / model.scale;
      return eval_dF(model, x) / eval_F(model, x);
    case LinkKind::Custom: {
      const double f = model.custom_F(x);
      if (!(f > 0.0))
        throw std::overflow_error("custom link: F(x) reached 0");
      return model.custom_dF(x) / f;
    }
  }
  throw std::logic_error("unreachable");
}

double ratio_dF_1mF(const LinkModel& model, double x) {
  switch (model.kind) {
    case LinkKind::Logistic:
    case LinkKind::Probit:
    case LinkKind::Laplace:
      // symmetry: F'(x)/(1-F(x)) = F'(-x)/F(-x)
      return ratio_dF_F(model, -x);
    case LinkKind::Custom: {
      check_finite(x);
      const double f = model.custom_F(x);
      if (!(f < 1.0))
        throw std::overflow_error("custom link: F(x) reached 1");
      return model.custom_dF(x) / (1.0 - f);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// sup of integrand over a uniform grid on [-alpha, alpha]
template <typename Fn>
double grid_sup(double alpha, Fn integrand) {
  if (alpha == 0.0) return integrand(0.0);
  double best = -1.0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = -alpha + 2.0 * alpha * i / (kGridPoints - 1);
    const double v = integrand(x);
    if (v > best) best = v;
  }
  return best;
}

void check_condition_u(const LinkModel& model, double x) {
  const double f = eval_F(model, x);
  const double df = eval_dF(model, x);
  if (!(f > 0.0) || !(f < 1.0) || !(df > 0.0))
    throw std::runtime_error("link model: F or F' vanishes on [-alpha, alpha]");
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be a nonnegative finite real");
}

}  // namespace

double l_alpha_grid(const LinkModel& model, double alpha) {
  check_alpha(alpha);
  return grid_sup(alpha, [&](double x) {
    check_condition_u(model, x);
    const double f = eval_F(model, x);
    return eval_dF(model, x) / (f * (1.0 - f));
  });
}

double beta_alpha_grid(const LinkModel& model, double alpha) {
  check_alpha(alpha);
  return grid_sup(alpha, [&](double x) {
    check_condition_u(model, x);
    const double f = eval_F(model, x);
    const double df = eval_dF(model, x);
    return f * (1.0 - f) / (df * df);
  });
}

double u_alpha_grid(const LinkModel& model, double alpha) {
  check_alpha(alpha);
  return grid_sup(alpha, [&](double x) {
    check_condition_u(model, x);
    const double f = eval_F(model, x);
    return -std::log(f) - std::log1p(-f);
  });
}

double l_alpha(const LinkModel& model, double alpha) {
  check_alpha(alpha);
  switch (model.kind) {
    case LinkKind::Logistic:
      return 1.0;
    case LinkKind::Laplace:
      return 2.0 / model.scale;
    default:
      return l_alpha_grid(model, alpha);
  }
}

double beta_alpha(const LinkModel& model, double alpha) {
  check_alpha(alpha);
  switch (model.kind) {
    case LinkKind::Logistic: {
      const double e = std::exp(alpha);
      return (1.0 + e) * (1.0 + e) / e;
    }
    case LinkKind::Laplace: {
      // direct evaluation gives b^2 (2 e^{alpha/b} - 1); the supremum is
      // attained at |x| = alpha
      const double b = model.scale;
      return b * b * (2.0 * std::exp(alpha / b) - 1.0);
    }
    default:
      return beta_alpha_grid(model, alpha);
  }
}

double u_alpha(const LinkModel& model, double alpha) {
  check_alpha(alpha);
  switch (model.kind) {
    case LinkKind::Logistic:
      // 2 log(e^{a/2} + e^{-a/2}), evaluated without overflow
      return alpha + 2.0 * std::log1p(std::exp(-alpha));
    case LinkKind::Laplace: {
      const double b = model.scale;
      return alpha / b + std::log(2.0) - std::log1p(-0.5 * std::exp(-alpha / b));
    }
    default:
      return u_alpha_grid(model, alpha);
  }
}

}  // namespace bitmc
