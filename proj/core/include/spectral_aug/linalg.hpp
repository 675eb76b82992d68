#pragma once

#include <Eigen/Dense>

namespace spectral_aug {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace spectral_aug
