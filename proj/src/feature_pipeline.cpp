#include "gpassure/feature_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "gpassure/errors.hpp"

namespace gpassure {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_finite(const Eigen::MatrixXd& X, const char* op) {
  if (!X.allFinite()) {
    throw InvalidInput(std::string(op) + ": input contains non-finite values");
  }
}

// Mean computed relative to the first element so that a constant column has
// an exact mean and exactly zero deviations.
double shifted_mean(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double origin = v(0);
  return origin + (v.array() - origin).sum() / static_cast<double>(v.size());
}

double sq_dist(const double* a, const double* b, Eigen::Index dim) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < dim; ++t) {
    const double diff = a[t] - b[t];
    s += diff * diff;
  }
  return s;
}

}  // namespace

Eigen::MatrixXd StandardizationStats::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != dim()) {
    throw InvalidInput("standardize: expected " + std::to_string(dim()) +
                       " columns, got " + std::to_string(X.cols()));
  }
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    out.col(j) = (X.col(j).array() - means(j)) / scales(j);
  }
  return out;
}

Eigen::VectorXd StandardizationStats::apply_point(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim()) {
    throw InvalidInput("standardize: expected " + std::to_string(dim()) +
                       " features, got " + std::to_string(x.size()));
  }
  return ((x - means).array() / scales.array()).matrix();
}

StandardizationStats standardize_fit(const Eigen::MatrixXd& X) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw InvalidInput("standardize_fit: empty matrix");
  }
  require_finite(X, "standardize_fit");
  StandardizationStats s;
  s.means.resize(X.cols());
  s.scales.resize(X.cols());
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = shifted_mean(X.col(j));
    const double var = (X.col(j).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    s.means(j) = mean;
    s.scales(j) = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

PCAProjection pca_fit(const Eigen::MatrixXd& X, Eigen::Index r) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n < 1 || d < 1) throw InvalidInput("pca_fit: empty matrix");
  if (r < 1 || r > std::min(n, d)) {
    throw InvalidInput("pca_fit: target dimension " + std::to_string(r) +
                       " outside [1, " + std::to_string(std::min(n, d)) + "]");
  }
  require_finite(X, "pca_fit");

  PCAProjection p;
  p.center = X.colwise().mean().transpose();
  const Eigen::MatrixXd centered = X.rowwise() - p.center.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n);

  // Eigenvalues come back ascending.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw InvalidInput("pca_fit: eigendecomposition did not converge");
  }
  p.components.resize(d, r);
  p.explained_variance.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index src = d - 1 - k;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    p.components.col(k) = v;
    p.explained_variance(k) = std::max(0.0, eig.eigenvalues()(src));
  }
  return p;
}

Eigen::MatrixXd pca_transform(const PCAProjection& p,
                              const Eigen::MatrixXd& X) {
  if (X.cols() != p.input_dim()) {
    throw InvalidInput("pca_transform: expected " +
                       std::to_string(p.input_dim()) + " columns, got " +
                       std::to_string(X.cols()));
  }
  return (X.rowwise() - p.center.transpose()) * p.components;
}

Eigen::VectorXd pca_transform_point(const PCAProjection& p,
                                    const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != p.input_dim()) {
    throw InvalidInput("pca_transform: expected " +
                       std::to_string(p.input_dim()) + " features, got " +
                       std::to_string(x.size()));
  }
  return p.components.transpose() * (x - p.center);
}

Eigen::MatrixXd pca_reconstruct(const PCAProjection& p,
                                const Eigen::MatrixXd& Z) {
  if (Z.cols() != p.output_dim()) {
    throw InvalidInput("pca_reconstruct: expected " +
                       std::to_string(p.output_dim()) + " columns, got " +
                       std::to_string(Z.cols()));
  }
  return (Z * p.components.transpose()).rowwise() + p.center.transpose();
}

Eigen::Index choose_pca_dim(const Eigen::MatrixXd& X, double variance_fraction,
                            Eigen::Index max_dim) {
  if (!(variance_fraction > 0.0 && variance_fraction <= 1.0)) {
    throw InvalidInput("choose_pca_dim: variance fraction must be in (0, 1]");
  }
  if (max_dim < 1) throw InvalidInput("choose_pca_dim: max_dim must be >= 1");
  const Eigen::Index full = std::min(X.rows(), X.cols());
  const PCAProjection p = pca_fit(X, full);
  const double total = p.explained_variance.sum();
  const Eigen::Index cap = std::min(full, max_dim);
  if (total <= 0.0) return 1;
  double acc = 0.0;
  for (Eigen::Index r = 1; r <= cap; ++r) {
    acc += p.explained_variance(r - 1);
    if (acc >= variance_fraction * total) return r;
  }
  return cap;
}

Eigen::MatrixXd FeatureProjection::project(const Eigen::MatrixXd& X) const {
  return pca_transform(pca, standardization.apply(X));
}

Eigen::VectorXd FeatureProjection::project_point(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return pca_transform_point(pca, standardization.apply_point(x));
}

ClusterAssignment kmeans(const Eigen::MatrixXd& X_in, Eigen::Index k,
                         std::uint64_t seed) {
  const Eigen::Index n = X_in.rows();
  const Eigen::Index dim = X_in.cols();
  if (n < 1) throw InvalidInput("kmeans: empty matrix");
  if (k < 1 || k > n) {
    throw InvalidInput("kmeans: cluster count " + std::to_string(k) +
                       " outside [1, " + std::to_string(n) + "]");
  }
  require_finite(X_in, "kmeans");

  const RowMatrix X = X_in;
  RowMatrix C(k, dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // k-means++ seeding.
  std::vector<double> closest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);
  Eigen::Index first = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
  C.row(0) = X.row(first);
  chosen[first] = true;
  for (Eigen::Index c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i],
                            sq_dist(X.row(i).data(), C.row(c - 1).data(), dim));
      total += closest[i];
    }
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (closest[i] <= 0.0) continue;
        acc += closest[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every point coincides with a chosen centroid.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
    }
    C.row(c) = X.row(pick);
    chosen[pick] = true;
  }

  ClusterAssignment out;
  std::vector<Eigen::Index> labels(n, -1);
  std::vector<Eigen::Index> previous;
  std::vector<double> point_cost(n, 0.0);
  std::vector<Eigen::Index> counts(k, 0);

  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* xi = X.row(i).data();
      Eigen::Index best = 0;
      double best_d = sq_dist(xi, C.row(0).data(), dim);
      for (Eigen::Index c = 1; c < k; ++c) {
        const double dc = sq_dist(xi, C.row(c).data(), dim);
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      labels[i] = best;
      point_cost[i] = best_d;
      inertia += best_d;
    }
    out.inertia_history.push_back(inertia);
    out.iterations = iter + 1;
    if (labels == previous) break;
    previous = labels;

    C.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      C.row(labels[i]) += X.row(i);
      ++counts[labels[i]];
    }
    std::vector<bool> used_for_reseed(n, false);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        C.row(c) /= static_cast<double>(counts[c]);
        continue;
      }
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (used_for_reseed[i]) continue;
        if (far < 0 || point_cost[i] > point_cost[far]) far = i;
      }
      used_for_reseed[far] = true;
      C.row(c) = X.row(far);
    }
  }

  out.centroids = C;
  out.labels = labels;
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    inertia += sq_dist(X.row(i).data(), C.row(labels[i]).data(), dim);
  }
  out.inertia = inertia;
  return out;
}

std::vector<Eigen::Index> select_gp_training(const Eigen::MatrixXd& features,
                                             const Eigen::VectorXd& errors,
                                             Eigen::Index m,
                                             std::uint64_t seed) {
  const Eigen::Index n = features.rows();
  if (errors.size() != n) {
    throw InvalidInput("select_gp_training: " + std::to_string(n) +
                       " feature rows but " + std::to_string(errors.size()) +
                       " errors");
  }
  if (!errors.allFinite()) {
    throw InvalidInput("select_gp_training: non-finite sensor error");
  }
  const ClusterAssignment clusters = kmeans(features, m, seed);

  std::vector<Eigen::Index> representative(m, -1);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index c = clusters.labels[i];
    const double d = (features.row(i) - clusters.centroids.row(c)).squaredNorm();
    if (d < best[c]) {
      best[c] = d;
      representative[c] = i;
    }
  }

  std::vector<bool> taken(n, false);
  for (Eigen::Index r : representative) {
    if (r >= 0) taken[r] = true;
  }
  // A cluster can end empty only in degenerate duplicate-heavy inputs; it then
  // takes the nearest point not already selected.
  for (Eigen::Index c = 0; c < m; ++c) {
    if (representative[c] >= 0) continue;
    Eigen::Index pick = -1;
    double pick_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double d =
          (features.row(i) - clusters.centroids.row(c)).squaredNorm();
      if (d < pick_d) {
        pick_d = d;
        pick = i;
      }
    }
    representative[c] = pick;
    taken[pick] = true;
  }

  std::sort(representative.begin(), representative.end());
  return representative;
}

}  // namespace gpassure
