#include "gpassure/kernel.hpp"

#include <cmath>
#include <string>

#include "gpassure/errors.hpp"

namespace gpassure {

void KernelParams::validate() const {
  if (!(std::isfinite(lengthscale) && lengthscale > 0.0)) {
    throw InvalidInput("kernel: lengthscale must be positive and finite, got " +
                       std::to_string(lengthscale));
  }
  if (!(std::isfinite(signal_variance) && signal_variance > 0.0)) {
    throw InvalidInput(
        "kernel: signal_variance must be positive and finite, got " +
        std::to_string(signal_variance));
  }
  if (!(std::isfinite(noise_variance) && noise_variance >= 0.0)) {
    throw InvalidInput(
        "kernel: noise_variance must be non-negative and finite, got " +
        std::to_string(noise_variance));
  }
}

double sq_exp(const Eigen::Ref<const Eigen::VectorXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& y,
              const KernelParams& p) {
  if (x.size() != y.size()) {
    throw InvalidInput("sq_exp: dimension mismatch (" +
                       std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()) + ")");
  }
  p.validate();
  return sq_exp_from_sq_dist((x - y).squaredNorm(), p);
}

Eigen::MatrixXd sq_dist_matrix(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& B) {
  if (A.cols() != B.cols()) {
    throw InvalidInput("sq_dist_matrix: dimension mismatch (" +
                       std::to_string(A.cols()) + " vs " +
                       std::to_string(B.cols()) + ")");
  }
  Eigen::MatrixXd D(A.rows(), B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      D(i, j) = (A.row(i) - B.row(j)).squaredNorm();
    }
  }
  return D;
}

Eigen::MatrixXd cov_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const KernelParams& p) {
  p.validate();
  Eigen::MatrixXd K = sq_dist_matrix(A, B);
  for (Eigen::Index j = 0; j < K.cols(); ++j) {
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
      K(i, j) = sq_exp_from_sq_dist(K(i, j), p);
    }
  }
  return K;
}

}  // namespace gpassure
