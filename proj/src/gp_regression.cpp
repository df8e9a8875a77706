#include "gpassure/gp_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "gpassure/errors.hpp"

namespace gpassure {
namespace {

double lml_from_factor(const JitteredFactor& f, const Eigen::VectorXd& y) {
  const Eigen::VectorXd alpha = f.llt.solve(y);
  const double n = static_cast<double>(y.size());
  const double log_det_half = f.llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * y.dot(alpha) - log_det_half -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

[[noreturn]] void throw_conditioning(const TrainingSet& ts,
                                     const KernelParams& p) {
  throw FitError(
      "fit: K(X, X) + noise I is not positive definite for n = " +
      std::to_string(ts.size()) + " (lengthscale " +
      std::to_string(p.lengthscale) + ", signal_variance " +
      std::to_string(p.signal_variance) +
      "); covariance is ill-conditioned even with jitter " +
      std::to_string(kJitterCeiling) + " x signal_variance");
}

}  // namespace

namespace {

bool factor_ok(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return false;
  const auto diag = llt.matrixLLT().diagonal();
  return diag.allFinite() && (diag.array() > 0.0).all();
}

}  // namespace

std::optional<JitteredFactor> jittered_cholesky(const Eigen::MatrixXd& K,
                                                const KernelParams& p) {
  const double ceiling = kJitterCeiling * p.signal_variance;
  double noise = std::max(p.noise_variance, kJitterFloor * p.signal_variance);
  const Eigen::Index n = K.rows();
  Eigen::MatrixXd A(n, n);
  while (true) {
    A = K;
    A.diagonal().array() += noise;
    JitteredFactor f{Eigen::LLT<Eigen::MatrixXd>(A), noise};
    if (factor_ok(f.llt)) return f;
    noise *= 2.0;
    if (noise > ceiling) return std::nullopt;
  }
}

void TrainingSet::validate() const {
  if (inputs.rows() < 1 || inputs.cols() < 1) {
    throw InvalidInput("training set: need at least one row and one column");
  }
  if (targets.size() != inputs.rows()) {
    throw InvalidInput("training set: " + std::to_string(inputs.rows()) +
                       " inputs but " + std::to_string(targets.size()) +
                       " targets");
  }
  if (!inputs.allFinite()) {
    throw InvalidInput("training set: non-finite input value");
  }
  if (!targets.allFinite()) {
    throw InvalidInput("training set: non-finite target value");
  }
}

Eigen::Index GPModel::input_dim() const {
  return projection_ ? projection_->input_dim() : model_dim();
}

double GPModel::log_marginal_likelihood() const {
  const double n = static_cast<double>(training_.size());
  return -0.5 * training_.targets.dot(weights_) -
         chol_.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

GPModel fit(TrainingSet ts, const KernelParams& p,
            std::optional<FeatureProjection> projection) {
  ts.validate();
  p.validate();
  if (projection && projection->output_dim() != ts.dim()) {
    throw InvalidInput("fit: projection outputs " +
                       std::to_string(projection->output_dim()) +
                       " dimensions but training inputs have " +
                       std::to_string(ts.dim()));
  }
  const Eigen::MatrixXd K = cov_matrix(ts.inputs, ts.inputs, p);
  auto f = jittered_cholesky(K, p);
  if (!f) throw_conditioning(ts, p);

  GPModel m;
  m.params_ = p;
  m.params_.noise_variance = f->noise_variance;
  m.chol_ = f->llt.matrixL();
  m.weights_ = f->llt.solve(ts.targets);
  m.training_ = std::move(ts);
  m.projection_ = std::move(projection);
  return m;
}

PredictiveDistribution predict_projected(
    const GPModel& m, const Eigen::Ref<const Eigen::VectorXd>& z) {
  const TrainingSet& ts = m.training_set();
  if (z.size() != ts.dim()) {
    throw InvalidInput("predict: expected " + std::to_string(ts.dim()) +
                       " model-space dimensions, got " +
                       std::to_string(z.size()));
  }
  if (!z.allFinite()) throw InvalidInput("predict: non-finite input");
  const KernelParams& p = m.params();
  Eigen::VectorXd k(ts.size());
  for (Eigen::Index i = 0; i < ts.size(); ++i) {
    k(i) = sq_exp_from_sq_dist((ts.inputs.row(i).transpose() - z).squaredNorm(),
                               p);
  }
  const Eigen::VectorXd v =
      m.chol_factor().triangularView<Eigen::Lower>().solve(k);
  double var = p.signal_variance + p.noise_variance - v.squaredNorm();
  if (var < 0.0) {
    if (var < -1e-10) {
      throw FitError("predict: predictive variance " + std::to_string(var) +
                     " is negative beyond rounding tolerance");
    }
    var = 0.0;
  }
  PredictiveDistribution out;
  out.mean = k.dot(m.weights());
  if (m.projection()) out.mean += m.projection()->target_offset;
  out.std = std::sqrt(var);
  return out;
}

PredictiveDistribution predict(const GPModel& m,
                               const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != m.input_dim()) {
    throw InvalidInput("predict: expected " + std::to_string(m.input_dim()) +
                       " features, got " + std::to_string(x.size()));
  }
  if (m.projection()) return predict_projected(m, m.projection()->project_point(x));
  return predict_projected(m, x);
}

std::vector<PredictiveDistribution> predict_all(const GPModel& m,
                                                const Eigen::MatrixXd& X) {
  if (X.cols() != m.input_dim()) {
    throw InvalidInput("predict: expected " + std::to_string(m.input_dim()) +
                       " features, got " + std::to_string(X.cols()));
  }
  const Eigen::MatrixXd Z = m.projection() ? m.projection()->project(X) : X;
  std::vector<PredictiveDistribution> out;
  out.reserve(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    out.push_back(predict_projected(m, Z.row(i).transpose()));
  }
  return out;
}

double log_marginal_likelihood(const TrainingSet& ts, const KernelParams& p) {
  ts.validate();
  p.validate();
  auto f = jittered_cholesky(cov_matrix(ts.inputs, ts.inputs, p), p);
  if (!f) throw_conditioning(ts, p);
  return lml_from_factor(*f, ts.targets);
}

void KernelGrid::validate() const {
  if (size() == 0) throw InvalidInput("kernel grid: empty axis");
  for (double l : lengthscales) KernelParams{l, 1.0, 0.0}.validate();
  for (double s : signal_variances) KernelParams{1.0, s, 0.0}.validate();
  for (double s : noise_variances) KernelParams{1.0, 1.0, s}.validate();
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo) || n < 1) {
    throw InvalidInput("log_space: need 0 < lo <= hi and n >= 1");
  }
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1));
  }
  return out;
}

KernelGrid KernelGrid::default_grid() {
  return KernelGrid{log_space(0.1, 10.0, 7), log_space(0.01, 100.0, 7),
                    log_space(1e-6, 1e-1, 6)};
}

KernelParams select_hyperparameters(const TrainingSet& ts,
                                    const KernelGrid& grid) {
  ts.validate();
  grid.validate();
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto lengthscales = sorted(grid.lengthscales);
  const auto signals = sorted(grid.signal_variances);
  const auto noises = sorted(grid.noise_variances);

  // Distances are shared by every grid point; the kernel value per point is
  // the same expression cov_matrix() evaluates.
  const Eigen::MatrixXd D = sq_dist_matrix(ts.inputs, ts.inputs);
  std::optional<KernelParams> best;
  double best_lml = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd K(D.rows(), D.cols());
  for (double l : lengthscales) {
    for (double s : signals) {
      const KernelParams base{l, s, 0.0};
      for (Eigen::Index j = 0; j < D.cols(); ++j) {
        for (Eigen::Index i = 0; i < D.rows(); ++i) {
          K(i, j) = sq_exp_from_sq_dist(D(i, j), base);
        }
      }
      for (double noise : noises) {
        const KernelParams p{l, s, noise};
        auto f = jittered_cholesky(K, p);
        if (!f) continue;
        const double lml = lml_from_factor(*f, ts.targets);
        if (std::isfinite(lml) && (!best || lml > best_lml)) {
          best = p;
          best_lml = lml;
        }
      }
    }
  }
  if (!best) {
    throw SelectionError("select_hyperparameters: none of the " +
                         std::to_string(grid.size()) +
                         " grid points produced a factorizable covariance");
  }
  return *best;
}

}  // namespace gpassure
