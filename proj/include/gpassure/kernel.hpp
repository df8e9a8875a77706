#pragma once

#include <cmath>

#include <Eigen/Core>

namespace gpassure {

// Hyperparameters of the isotropic squared-exponential covariance.
//   lengthscale      > 0, feature-space distance units
//   signal_variance  > 0, squared error units
//   noise_variance  >= 0, added to the diagonal of K(X, X) only
struct KernelParams {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 0.0;

  // Throws InvalidInput when an invariant is violated.
  void validate() const;

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

// k(x, y) = signal_variance * exp(-|x - y|^2 / (2 lengthscale^2))
double sq_exp(const Eigen::Ref<const Eigen::VectorXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& y,
              const KernelParams& p);

// Same covariance expressed on a precomputed squared distance.
inline double sq_exp_from_sq_dist(double sq_dist, const KernelParams& p) {
  return p.signal_variance *
         std::exp(-0.5 * (sq_dist / p.lengthscale) / p.lengthscale);
}

// Rows of A and B are points. Result(i, j) = sq_exp(A.row(i), B.row(j), p).
// Noise is never added here.
Eigen::MatrixXd cov_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const KernelParams& p);

// Result(i, j) = |A.row(i) - B.row(j)|^2, evaluated by explicit differences.
Eigen::MatrixXd sq_dist_matrix(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& B);

}  // namespace gpassure
