#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "gpassure/feature_pipeline.hpp"
#include "gpassure/kernel.hpp"

namespace gpassure {

// GP training data in model space: one row of `inputs` per observed sensor
// error in `targets`.
struct TrainingSet {
  Eigen::MatrixXd inputs;   // n x d
  Eigen::VectorXd targets;  // n

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index dim() const { return inputs.cols(); }
  void validate() const;
};

// Gaussian over the predicted sensor error at one input.
struct PredictiveDistribution {
  double mean = 0.0;
  double std = 0.0;
};

// The diagonal term added to K(X, X) never drops below this multiple of the
// signal variance, and escalation by doubling stops above kJitterCeiling.
inline constexpr double kJitterFloor = 1e-10;
inline constexpr double kJitterCeiling = 1e-4;

struct JitteredFactor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double noise_variance = 0.0;  // diagonal term actually added
};

// Cholesky of K + s I starting from s = max(noise_variance, floor *
// signal_variance) and doubling s until the factor has a finite positive
// diagonal. Empty when s would exceed kJitterCeiling * signal_variance.
std::optional<JitteredFactor> jittered_cholesky(const Eigen::MatrixXd& K,
                                                const KernelParams& p);

// Fitted posterior. Immutable once built; safe to share across threads.
class GPModel {
 public:
  const TrainingSet& training_set() const { return training_; }
  // Hyperparameters as used, i.e. noise_variance includes any jitter.
  const KernelParams& params() const { return params_; }
  // Lower factor L with L L^T = K(X, X) + noise_variance I.
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  // Solves (K(X, X) + noise_variance I) w = targets.
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::optional<FeatureProjection>& projection() const {
    return projection_;
  }

  // Dimension of vectors accepted by predict(): raw features when a
  // projection is attached, model space otherwise.
  Eigen::Index input_dim() const;
  Eigen::Index model_dim() const { return training_.dim(); }

  double log_marginal_likelihood() const;

 private:
  friend GPModel fit(TrainingSet ts, const KernelParams& p,
                     std::optional<FeatureProjection> projection);

  TrainingSet training_;
  KernelParams params_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd weights_;
  std::optional<FeatureProjection> projection_;
};

// Factorizes K(X, X) + max(noise, floor) I, doubling the jitter on failure.
// Throws FitError when the ceiling is passed.
GPModel fit(TrainingSet ts, const KernelParams& p,
            std::optional<FeatureProjection> projection = std::nullopt);

// Posterior predictive of the observed sensor error:
//   mean = k*^T (K + s I)^-1 E            (+ projection target offset)
//   var  = k(x, x) + s - k*^T (K + s I)^-1 k*
// with s the model's noise_variance. x is in raw feature space when the model
// carries a projection.
PredictiveDistribution predict(const GPModel& m,
                               const Eigen::Ref<const Eigen::VectorXd>& x);

// Same as predict() but x is already in model space.
PredictiveDistribution predict_projected(
    const GPModel& m, const Eigen::Ref<const Eigen::VectorXd>& z);

// Row-wise predict().
std::vector<PredictiveDistribution> predict_all(const GPModel& m,
                                                const Eigen::MatrixXd& X);

// -1/2 E^T (K + s I)^-1 E - 1/2 log det(K + s I) - n/2 log 2 pi, with the same
// jitter policy as fit().
double log_marginal_likelihood(const TrainingSet& ts, const KernelParams& p);

// Cartesian product of three axes.
struct KernelGrid {
  std::vector<double> lengthscales;
  std::vector<double> signal_variances;
  std::vector<double> noise_variances;

  std::size_t size() const {
    return lengthscales.size() * signal_variances.size() *
           noise_variances.size();
  }
  void validate() const;

  // lengthscale 0.1..10 (7 log-spaced), signal variance 0.01..100 (7),
  // noise variance 1e-6..1e-1 (6).
  static KernelGrid default_grid();
};

// n log-spaced values from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int n);

// Grid point with the highest log marginal likelihood. Ties go to the smallest
// lengthscale, then signal variance, then noise variance. Points whose
// factorization fails are skipped; SelectionError if all fail.
KernelParams select_hyperparameters(const TrainingSet& ts,
                                    const KernelGrid& grid);

}  // namespace gpassure
