#include "gpassure/feature_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "gpassure/errors.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace gpassure {
namespace {

TEST(StandardizeTest, SingleRow) {
  Eigen::MatrixXd X(1, 3);
  X << 1.5, -2.0, 7.0;
  const auto s = standardize_fit(X);
  EXPECT_TRUE(s.means == X.row(0).transpose());
  EXPECT_TRUE(s.scales == Eigen::VectorXd::Ones(3));
}

TEST(StandardizeTest, ConstantColumn) {
  Eigen::MatrixXd X(4, 2);
  X << 0.1, 1.0, 0.1, 2.0, 0.1, 3.0, 0.1, 5.0;
  const auto s = standardize_fit(X);
  EXPECT_EQ(s.scales(0), 1.0);
  const Eigen::MatrixXd Z = s.apply(X);
  EXPECT_TRUE((Z.col(0).array() == 0.0).all());
}

TEST(StandardizeTest, ProducesZeroMeanUnitStd) {
  std::mt19937_64 rng(9);
  Eigen::MatrixXd X = oracle::random_matrix(100, 5, rng, -3.0, 3.0);
  for (int j = 0; j < 5; ++j) X.col(j) = X.col(j) * (j + 1) + Eigen::VectorXd::Constant(100, 10.0 * j);
  const Eigen::MatrixXd Z = standardize_fit(X).apply(X);
  for (int j = 0; j < 5; ++j) {
    double mean = 0.0;
    for (int i = 0; i < 100; ++i) mean += Z(i, j);
    mean /= 100.0;
    double var = 0.0;
    for (int i = 0; i < 100; ++i) var += (Z(i, j) - mean) * (Z(i, j) - mean);
    EXPECT_LT(std::abs(mean), 1e-10);
    EXPECT_NEAR(std::sqrt(var / 100.0), 1.0, 1e-10);
  }
}

TEST(StandardizeTest, RejectsEmptyAndMismatch) {
  EXPECT_THROW(standardize_fit(Eigen::MatrixXd(0, 3)), InvalidInput);
  const auto s = standardize_fit(Eigen::MatrixXd::Ones(2, 3));
  EXPECT_THROW(s.apply(Eigen::MatrixXd::Ones(2, 2)), InvalidInput);
  EXPECT_THROW(s.apply_point(Eigen::VectorXd::Ones(4)), InvalidInput);
}

TEST(PcaTest, LineEmbeddedIn3D) {
  std::mt19937_64 rng(1);
  const Eigen::Vector3d dir = Eigen::Vector3d(1.0, -2.0, 0.5).normalized();
  const Eigen::Vector3d offset(3.0, 1.0, -1.0);
  Eigen::MatrixXd X(50, 3);
  for (int i = 0; i < 50; ++i) {
    X.row(i) = (offset + oracle::random_vector(1, rng, -4.0, 4.0)(0) * dir).transpose();
  }
  const PCAProjection p = pca_fit(X, 1);
  EXPECT_LE((pca_reconstruct(p, pca_transform(p, X)) - X).squaredNorm(), 1e-8);
  EXPECT_NEAR(std::abs(p.components.col(0).dot(dir)), 1.0, 1e-10);
}

TEST(PcaTest, FullRankExplainsAllVariance) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd X = oracle::random_matrix(40, 6, rng);
  const PCAProjection p = pca_fit(X, 6);
  const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
  const double total = centered.squaredNorm() / 40.0;
  EXPECT_NEAR(p.explained_variance.sum(), total, 1e-8);
}

// Eckart-Young: the rank-r reconstruction error of centered data equals the
// sum of the discarded squared singular values. The SVD is an independent
// route to the same quantity.
TEST(PcaTest, ReconstructionIsOptimalRankR) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd X =
      oracle::random_matrix(200, 10, rng) * oracle::random_matrix(10, 10, rng, -2.0, 2.0);
  const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(centered).singularValues();
  double previous = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= 10; ++r) {
    const PCAProjection p = pca_fit(X, r);
    const double err = (pca_reconstruct(p, pca_transform(p, X)) - X).squaredNorm();
    const double optimal = sv.tail(10 - r).squaredNorm();
    EXPECT_NEAR(err, optimal, 1e-8 * std::max(1.0, sv.squaredNorm())) << "r = " << r;
    EXPECT_LE(err, previous + 1e-9);
    previous = err;
  }
}

TEST(PcaTest, RejectsOutOfRangeDimension) {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 3);
  EXPECT_THROW(pca_fit(X, 0), InvalidInput);
  EXPECT_THROW(pca_fit(X, 4), InvalidInput);
  EXPECT_THROW(pca_fit(Eigen::MatrixXd::Random(2, 3), 3), InvalidInput);
}

TEST(PcaTransformTest, CenterMapsToZero) {
  std::mt19937_64 rng(4);
  const PCAProjection p = pca_fit(oracle::random_matrix(30, 4, rng), 2);
  Eigen::MatrixXd centers(3, 4);
  centers.rowwise() = p.center.transpose();
  EXPECT_LE(pca_transform(p, centers).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PcaTransformTest, RoundTripsRankRData) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd X =
      oracle::random_matrix(60, 2, rng) * oracle::random_matrix(2, 5, rng) +
      Eigen::MatrixXd::Constant(60, 5, 0.3);
  const PCAProjection p = pca_fit(X, 2);
  EXPECT_LE((pca_reconstruct(p, pca_transform(p, X)) - X).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PcaTransformTest, MatchesTwoStepComputation) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd X = oracle::random_matrix(25, 4, rng, -3.0, 3.0);
  const PCAProjection p = pca_fit(X, 3);
  const Eigen::MatrixXd Z = pca_transform(p, X);
  for (int i = 0; i < 25; ++i) {
    std::vector<double> centered(4);
    for (int j = 0; j < 4; ++j) centered[j] = X(i, j) - p.center(j);
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int j = 0; j < 4; ++j) s += centered[j] * p.components(j, k);
      EXPECT_NEAR(Z(i, k), s, 1e-10);
    }
    EXPECT_LE((pca_transform_point(p, X.row(i).transpose()) - Z.row(i).transpose())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
  EXPECT_THROW(pca_transform(p, Eigen::MatrixXd::Zero(2, 3)), InvalidInput);
}

TEST(PcaPropertyTest, OrthonormalAndMonotone) {
  const auto outcome = props::pca_orthonormal_monotone(100, 23);
  EXPECT_TRUE(outcome.ok()) << outcome.failure;
}

TEST(ChoosePcaDimTest, SmallestDimensionReachingFraction) {
  std::mt19937_64 rng(7);
  // Three strong directions plus weak noise in 8 dimensions.
  Eigen::MatrixXd X = oracle::random_matrix(300, 3, rng, -5.0, 5.0) *
                      oracle::random_matrix(3, 8, rng);
  X += oracle::random_matrix(300, 8, rng, -0.01, 0.01);
  EXPECT_EQ(choose_pca_dim(X, 0.95, 32), 3);
  EXPECT_EQ(choose_pca_dim(X, 0.95, 2), 2);
  EXPECT_EQ(choose_pca_dim(X, 1.0, 32), 8);
}

TEST(KmeansTest, EveryPointItsOwnCluster) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd X = oracle::random_matrix(12, 2, rng);
  const ClusterAssignment c = kmeans(X, 12, 5);
  EXPECT_EQ(c.inertia, 0.0);
  std::set<Eigen::Index> labels(c.labels.begin(), c.labels.end());
  EXPECT_EQ(labels.size(), 12u);
  for (int i = 0; i < 12; ++i) {
    EXPECT_TRUE(c.centroids.row(c.labels[i]) == X.row(i));
  }
}

TEST(KmeansTest, SingleClusterIsTheMean) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd X = oracle::random_matrix(40, 3, rng);
  const ClusterAssignment c = kmeans(X, 1, 0);
  EXPECT_LE((c.centroids.row(0) - X.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KmeansTest, SeparatesTwoBlobs) {
  const std::vector<Eigen::VectorXd> centers{Eigen::Vector2d(-10.0, 0.0),
                                             Eigen::Vector2d(10.0, 0.0)};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [X, ids] = oracle::blobs(centers, 100, 1.0, 500 + seed);
    const ClusterAssignment c = kmeans(X, 2, seed);
    int agree = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      agree += (c.labels[i] == c.labels[0]) == (ids[i] == ids[0]) ? 1 : 0;
    }
    EXPECT_GE(agree, 198) << "seed " << seed;
  }
}

TEST(KmeansTest, DeterministicPerSeed) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd X = oracle::random_matrix(80, 3, rng);
  const auto a = kmeans(X, 7, 42);
  const auto b = kmeans(X, 7, 42);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_TRUE(a.centroids == b.centroids);
}

TEST(KmeansTest, RejectsBadClusterCount) {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 2);
  EXPECT_THROW(kmeans(X, 0, 0), InvalidInput);
  EXPECT_THROW(kmeans(X, 6, 0), InvalidInput);
}

TEST(KmeansPropertyTest, InertiaNonIncreasing) {
  const auto outcome = props::kmeans_inertia_monotone(200, 29);
  EXPECT_TRUE(outcome.ok()) << outcome.failure;
}

TEST(SelectGpTrainingTest, AllIndicesWhenMEqualsN) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd X = oracle::random_matrix(15, 2, rng);
  const auto idx = select_gp_training(X, Eigen::VectorXd::Zero(15), 15, 3);
  std::vector<Eigen::Index> expected(15);
  std::iota(expected.begin(), expected.end(), Eigen::Index{0});
  EXPECT_EQ(idx, expected);
}

TEST(SelectGpTrainingTest, OneRepresentativePerDuplicatePair) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd base = oracle::random_matrix(10, 3, rng);
  Eigen::MatrixXd X(20, 3);
  X << base, base;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto idx = select_gp_training(X, Eigen::VectorXd::Zero(20), 10, seed);
    ASSERT_EQ(idx.size(), 10u);
    std::set<Eigen::Index> pairs;
    for (auto i : idx) pairs.insert(i % 10);
    EXPECT_EQ(pairs.size(), 10u) << "seed " << seed;
    // Ties between the two copies go to the lower index.
    for (auto i : idx) EXPECT_LT(i, 10);
  }
}

TEST(SelectGpTrainingTest, OneIndexPerBlob) {
  const std::vector<Eigen::VectorXd> centers{
      Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(20.0, 0.0),
      Eigen::Vector2d(0.0, 20.0), Eigen::Vector2d(20.0, 20.0)};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [X, ids] = oracle::blobs(centers, 30, 1.0, 900 + seed);
    const auto idx = select_gp_training(X, Eigen::VectorXd::Zero(X.rows()), 4, seed);
    std::set<int> blobs;
    for (auto i : idx) blobs.insert(ids[i]);
    EXPECT_EQ(blobs.size(), 4u) << "seed " << seed;
  }
}

TEST(SelectGpTrainingTest, NoDuplicatesAndDeterministic) {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd X = oracle::random_matrix(300, 4, rng);
  const Eigen::VectorXd e = oracle::random_vector(300, rng);
  const auto a = select_gp_training(X, e, 40, 17);
  const auto b = select_gp_training(X, e, 40, 17);
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::set<Eigen::Index>(a.begin(), a.end()).size(), 40u);
  EXPECT_THROW(select_gp_training(X, e, 0, 1), InvalidInput);
  EXPECT_THROW(select_gp_training(X, e.head(10), 5, 1), InvalidInput);
}

}  // namespace
}  // namespace gpassure
