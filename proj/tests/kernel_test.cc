#include "gpassure/kernel.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gpassure/errors.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace gpassure {
namespace {

TEST(SqExpTest, ZeroDistanceGivesSignalVariance) {
  const Eigen::Vector3d x(0.3, -1.2, 4.0);
  EXPECT_EQ(sq_exp(x, x, KernelParams{0.7, 2.0, 0.0}), 2.0);
}

TEST(SqExpTest, DecaysToZeroFarAway) {
  const Eigen::Vector2d x(0.0, 0.0);
  const Eigen::Vector2d y(1e3, -1e3);
  EXPECT_EQ(sq_exp(x, y, KernelParams{1.0, 1.0, 0.0}), 0.0);
  EXPECT_LT(sq_exp(x, Eigen::Vector2d(10.0, 0.0), KernelParams{1.0, 1.0, 0.0}),
            1e-20);
}

TEST(SqExpTest, UnitDistanceClosedForm) {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.0);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
  const double expected = oracle::sq_exp({0.0}, {1.0}, 1.0, 1.0);
  EXPECT_NEAR(expected, 0.6065306597, 1e-10);
  EXPECT_NEAR(sq_exp(x, y, KernelParams{1.0, 1.0, 0.0}), expected, 1e-15);
}

TEST(SqExpTest, RejectsDimensionMismatch) {
  EXPECT_THROW(sq_exp(Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0),
                      KernelParams{}),
               InvalidInput);
}

TEST(KernelParamsTest, RejectsInvalid) {
  EXPECT_THROW((KernelParams{0.0, 1.0, 0.0}.validate()), InvalidInput);
  EXPECT_THROW((KernelParams{1.0, -1.0, 0.0}.validate()), InvalidInput);
  EXPECT_THROW((KernelParams{1.0, 1.0, -1e-9}.validate()), InvalidInput);
  EXPECT_THROW(
      (KernelParams{std::numeric_limits<double>::quiet_NaN(), 1.0, 0.0}
           .validate()),
      InvalidInput);
  EXPECT_NO_THROW((KernelParams{1.0, 1.0, 0.0}.validate()));
}

TEST(CovMatrixTest, SingleRow) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Constant(1, 3, 0.5);
  const Eigen::MatrixXd K = cov_matrix(A, A, KernelParams{2.0, 3.5, 0.1});
  ASSERT_EQ(K.rows(), 1);
  ASSERT_EQ(K.cols(), 1);
  EXPECT_EQ(K(0, 0), 3.5);
}

TEST(CovMatrixTest, SymmetricForSameInputs) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd A = oracle::random_matrix(9, 4, rng);
  const Eigen::MatrixXd K = cov_matrix(A, A, KernelParams{0.8, 1.3, 0.0});
  EXPECT_TRUE(K == K.transpose());
}

TEST(CovMatrixTest, MatchesScalarOracle) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd A = oracle::random_matrix(5, 3, rng);
  const Eigen::MatrixXd B = oracle::random_matrix(4, 3, rng);
  const KernelParams p{0.6, 1.7, 0.0};
  const Eigen::MatrixXd K = cov_matrix(A, B, p);
  ASSERT_EQ(K.rows(), 5);
  ASSERT_EQ(K.cols(), 4);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(K(i, j),
                  oracle::sq_exp(oracle::row(A, i), oracle::row(B, j), 0.6, 1.7),
                  1e-12);
    }
  }
}

TEST(CovMatrixTest, RejectsDimensionMismatch) {
  EXPECT_THROW(cov_matrix(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 2),
                          KernelParams{}),
               InvalidInput);
}

TEST(KernelPropertyTest, SymmetryAndPositiveSemidefinite) {
  const auto outcome = props::kernel_symmetry_psd(300, 17);
  EXPECT_TRUE(outcome.ok()) << outcome.failure;
  EXPECT_EQ(outcome.trials, 300);
}

}  // namespace
}  // namespace gpassure
