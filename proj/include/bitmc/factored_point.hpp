#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace bitmc {

// A factor pair representing M = U V^T with U: d1 x k, V: d2 x k.
struct FactoredPoint {
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;

  int d1() const { return static_cast<int>(U.rows()); }
  int d2() const { return static_cast<int>(V.rows()); }
  int k() const { return static_cast<int>(U.cols()); }

  Eigen::MatrixXd product() const {
    if (U.cols() != V.cols())
      throw std::invalid_argument("factored point: column counts differ");
    return U * V.transpose();
  }
};

}  // namespace bitmc
