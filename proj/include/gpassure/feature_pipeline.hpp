#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace gpassure {

// Per-column affine normalization. Rows of every matrix are samples.
struct StandardizationStats {
  Eigen::VectorXd means;
  Eigen::VectorXd scales;  // population std, zero-variance columns get 1

  Eigen::Index dim() const { return means.size(); }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd apply_point(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

StandardizationStats standardize_fit(const Eigen::MatrixXd& X);

// Linear projection onto the leading principal directions.
struct PCAProjection {
  Eigen::MatrixXd components;          // d x r, orthonormal columns
  Eigen::VectorXd explained_variance;  // length r, non-increasing
  Eigen::VectorXd center;              // length d

  Eigen::Index input_dim() const { return components.rows(); }
  Eigen::Index output_dim() const { return components.cols(); }
};

// Population covariance eigendecomposition of X. Requires 1 <= r <= min(n, d).
// Each component is sign-normalized so its largest-magnitude entry is positive.
PCAProjection pca_fit(const Eigen::MatrixXd& X, Eigen::Index r);

// (X - center) * components
Eigen::MatrixXd pca_transform(const PCAProjection& p, const Eigen::MatrixXd& X);
Eigen::VectorXd pca_transform_point(const PCAProjection& p,
                                    const Eigen::Ref<const Eigen::VectorXd>& x);

// Z * components^T + center
Eigen::MatrixXd pca_reconstruct(const PCAProjection& p, const Eigen::MatrixXd& Z);

// Smallest r whose leading eigenvalues reach variance_fraction of the total,
// capped at max_dim and at min(n, d).
Eigen::Index choose_pca_dim(const Eigen::MatrixXd& X, double variance_fraction,
                            Eigen::Index max_dim);

inline constexpr double kDefaultVarianceFraction = 0.95;
inline constexpr Eigen::Index kDefaultMaxPcaDim = 32;

struct ClusterAssignment {
  Eigen::MatrixXd centroids;       // k x r
  std::vector<Eigen::Index> labels;
  double inertia = 0.0;            // recomputed against final centroids
  std::vector<double> inertia_history;  // after each assignment step
  int iterations = 0;
};

inline constexpr int kMaxLloydIterations = 300;

// k-means++ seeding followed by Lloyd iterations until the labels stop
// changing or kMaxLloydIterations. Nearest-centroid ties go to the lowest
// centroid index. Empty clusters are re-seeded at the point farthest from its
// assigned centroid.
ClusterAssignment kmeans(const Eigen::MatrixXd& X, Eigen::Index k,
                         std::uint64_t seed);

// Clusters the rows into m groups and returns one index per cluster: the
// member nearest its centroid (ties to the lowest index). The result is
// sorted ascending and contains no duplicates.
std::vector<Eigen::Index> select_gp_training(const Eigen::MatrixXd& features,
                                             const Eigen::VectorXd& errors,
                                             Eigen::Index m,
                                             std::uint64_t seed);

// Maps raw feature vectors into the space the GP is fitted in
// (standardize, then PCA) and records the offset removed from the sensor
// errors so the GP can use a zero-mean prior.
struct FeatureProjection {
  StandardizationStats standardization;
  PCAProjection pca;
  double target_offset = 0.0;

  Eigen::Index input_dim() const { return standardization.dim(); }
  Eigen::Index output_dim() const { return pca.output_dim(); }
  Eigen::MatrixXd project(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd project_point(
      const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

}  // namespace gpassure
