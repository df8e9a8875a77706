#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's numerical paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace gpassure::oracle {

inline double sq_exp(const std::vector<double>& x, const std::vector<double>& y,
                     double lengthscale, double signal_variance) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return signal_variance * std::exp(-s / (2.0 * lengthscale * lengthscale));
}

inline std::vector<double> row(const Eigen::MatrixXd& M, Eigen::Index i) {
  std::vector<double> out(M.cols());
  for (Eigen::Index j = 0; j < M.cols(); ++j) out[j] = M(i, j);
  return out;
}

inline Eigen::MatrixXd kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              double lengthscale, double signal_variance) {
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      K(i, j) = sq_exp(row(A, i), row(B, j), lengthscale, signal_variance);
    }
  }
  return K;
}

struct Posterior {
  double mean;
  double variance;
};

// Posterior predictive through an explicit inverse of K + noise I.
inline Posterior gp_posterior(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& query, double lengthscale,
                              double signal_variance, double noise_variance) {
  Eigen::MatrixXd K = kernel(X, X, lengthscale, signal_variance);
  K.diagonal().array() += noise_variance;
  const Eigen::MatrixXd Kinv = K.fullPivLu().inverse();
  const Eigen::VectorXd k =
      kernel(X, query.transpose(), lengthscale, signal_variance).col(0);
  return {k.dot(Kinv * y),
          signal_variance + noise_variance - k.dot(Kinv * k)};
}

// Log marginal likelihood with an explicit determinant and inverse.
inline double log_marginal_likelihood(const Eigen::MatrixXd& X,
                                      const Eigen::VectorXd& y,
                                      double lengthscale,
                                      double signal_variance,
                                      double noise_variance) {
  Eigen::MatrixXd K = kernel(X, X, lengthscale, signal_variance);
  K.diagonal().array() += noise_variance;
  const auto lu = K.fullPivLu();
  const double n = static_cast<double>(y.size());
  return -0.5 * y.dot(lu.inverse() * y) - 0.5 * std::log(lu.determinant()) -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

inline double gaussian_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// Composite Simpson rule with `intervals` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Phi^-1(p) by bisection.
inline double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& rng, double lo = -1.0,
                                     double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = u(rng);
  }
  return M;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng,
                                     double lo = -1.0, double hi = 1.0) {
  return random_matrix(n, 1, rng, lo, hi).col(0);
}

// Two isotropic Gaussian blobs far apart; returns points and true blob ids.
inline std::pair<Eigen::MatrixXd, std::vector<int>> blobs(
    const std::vector<Eigen::VectorXd>& centers, Eigen::Index per_blob,
    double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sd);
  const Eigen::Index dim = centers.front().size();
  Eigen::MatrixXd X(per_blob * static_cast<Eigen::Index>(centers.size()), dim);
  std::vector<int> ids;
  Eigen::Index r = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (Eigen::Index i = 0; i < per_blob; ++i, ++r) {
      for (Eigen::Index j = 0; j < dim; ++j) X(r, j) = centers[c](j) + normal(rng);
      ids.push_back(static_cast<int>(c));
    }
  }
  return {X, ids};
}

}  // namespace gpassure::oracle
