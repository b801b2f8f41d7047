#include "bitmc/norms.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bitmc {

namespace {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& M) {
  if (!M.allFinite()) throw std::invalid_argument("norms: non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (!sv.allFinite()) throw std::runtime_error("norms: SVD failed");
  return sv;
}

}  // namespace

double inf_norm(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

double weighted_frobenius(const Eigen::MatrixXd& M, const SamplingDistribution& dist) {
  if (M.rows() != dist.d1 || M.cols() != dist.d2)
    throw std::invalid_argument("weighted_frobenius: dimension mismatch");
  return std::sqrt((dist.probs.array() * M.array().square()).sum());
}

double trace_norm(const Eigen::MatrixXd& M) { return singular_values(M).sum(); }

double weighted_trace_norm(const Eigen::MatrixXd& M,
                           const Eigen::VectorXd& row_marg,
                           const Eigen::VectorXd& col_marg) {
  if (M.rows() != row_marg.size() || M.cols() != col_marg.size())
    throw std::invalid_argument("weighted_trace_norm: dimension mismatch");
  if ((row_marg.array() <= 0.0).any() || (col_marg.array() <= 0.0).any())
    throw std::invalid_argument("weighted_trace_norm: marginals must be positive");
  const Eigen::MatrixXd Mw = row_marg.array().sqrt().matrix().asDiagonal() * M *
                             col_marg.array().sqrt().matrix().asDiagonal();
  return trace_norm(Mw);
}

double max_row_norm(const Eigen::MatrixXd& A) {
  return A.rows() == 0 ? 0.0 : A.rowwise().norm().maxCoeff();
}

double maxnorm_certificate(const FactoredPoint& point) {
  if (point.U.cols() != point.V.cols())
    throw std::invalid_argument("maxnorm_certificate: factor dims disagree");
  return max_row_norm(point.U) * max_row_norm(point.V);
}

double maxnorm_lower_bound(const Eigen::MatrixXd& M) {
  const double d1d2 = static_cast<double>(M.rows()) * M.cols();
  return std::max(trace_norm(M) / std::sqrt(d1d2), inf_norm(M));
}

FactoredPoint balanced_svd_factorization(const Eigen::MatrixXd& M) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd root = svd.singularValues().array().sqrt();
  return FactoredPoint{svd.matrixU() * root.asDiagonal(),
                       svd.matrixV() * root.asDiagonal()};
}

int numerical_rank(const Eigen::MatrixXd& M) {
  const Eigen::VectorXd sv = singular_values(M);
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  return static_cast<int>((sv.array() > 1e-12 * sv[0]).count());
}

NormReport norm_report(const Eigen::MatrixXd& M) {
  return norm_report(M, balanced_svd_factorization(M));
}

NormReport norm_report(const Eigen::MatrixXd& M, const FactoredPoint& point) {
  NormReport r;
  r.frobenius = M.norm();
  r.inf_norm = inf_norm(M);
  r.trace_norm = trace_norm(M);
  r.maxnorm_upper = maxnorm_certificate(point);
  r.maxnorm_lower = maxnorm_lower_bound(M);
  return r;
}

std::string NormReport::to_json() const {
  std::ostringstream out;
  out.precision(17);
  out << "{\"frobenius\":" << frobenius << ",\"inf_norm\":" << inf_norm
      << ",\"trace_norm\":" << trace_norm << ",\"maxnorm_upper\":" << maxnorm_upper
      << ",\"maxnorm_lower\":" << maxnorm_lower << "}";
  return out.str();
}

}  // namespace bitmc
