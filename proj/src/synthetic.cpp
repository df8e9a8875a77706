#include "gpassure/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gpassure/errors.hpp"

namespace gpassure {
namespace {

struct Embedding {
  Eigen::MatrixXd latent_to_features;  // d x L
  Eigen::MatrixXd error_projection;    // 2 x d, rows scaled per latent unit
};

Embedding make_embedding(const SyntheticEnvSpec& spec) {
  std::mt19937_64 rng(spec.embedding_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index d = spec.feature_dim;
  const Eigen::Index L = spec.latent_dim();
  Embedding e;
  e.latent_to_features.resize(d, L);
  for (Eigen::Index j = 0; j < L; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) e.latent_to_features(i, j) = normal(rng);
  }
  e.error_projection.resize(2, d);
  for (Eigen::Index k = 0; k < 2; ++k) {
    Eigen::VectorXd p(d);
    for (Eigen::Index i = 0; i < d; ++i) p(i) = normal(rng);
    p.normalize();
    const double gain = (e.latent_to_features.transpose() * p).norm();
    e.error_projection.row(k) = p.transpose() / gain;
  }
  return e;
}

double error_fn(const std::vector<double>& c, const Eigen::Vector2d& u) {
  return c[0] + c[1] * u(0) + c[2] * u(1) + c[3] * u(0) * u(0) +
         c[4] * u(0) * u(1) + c[5] * std::sin(c[6] * u(0) + c[7] * u(1));
}

}  // namespace

void SyntheticEnvSpec::validate() const {
  if (name.empty() || name.find_first_of(",\n\r") != std::string::npos) {
    throw InvalidInput("synthetic spec: name must be non-empty without ','");
  }
  if (mixture_means.empty()) {
    throw InvalidInput("synthetic spec: need at least one mixture component");
  }
  if (mixture_scales.size() != mixture_means.size()) {
    throw InvalidInput("synthetic spec: one scale per mixture mean required");
  }
  for (const auto& m : mixture_means) {
    if (m.size() != latent_dim() || m.size() < 1 || !m.allFinite()) {
      throw InvalidInput("synthetic spec: mixture means must share a finite "
                         "latent dimension >= 1");
    }
  }
  for (double s : mixture_scales) {
    if (!(std::isfinite(s) && s > 0.0)) {
      throw InvalidInput("synthetic spec: mixture scales must be positive");
    }
  }
  if (error_fn_coeffs.size() != 8) {
    throw InvalidInput("synthetic spec: error function needs 8 coefficients");
  }
  for (double c : error_fn_coeffs) {
    if (!std::isfinite(c)) {
      throw InvalidInput("synthetic spec: non-finite error coefficient");
    }
  }
  if (!(std::isfinite(noise_std) && noise_std >= 0.0)) {
    throw InvalidInput("synthetic spec: noise_std must be >= 0");
  }
  if (!(std::isfinite(feature_noise_std) && feature_noise_std >= 0.0)) {
    throw InvalidInput("synthetic spec: feature_noise_std must be >= 0");
  }
  if (feature_dim < 2) {
    throw InvalidInput("synthetic spec: feature_dim must be >= 2");
  }
}

double synthetic_error(const SyntheticEnvSpec& spec,
                       const Eigen::Ref<const Eigen::VectorXd>& features) {
  spec.validate();
  if (features.size() != spec.feature_dim) {
    throw InvalidInput("synthetic_error: feature dimension mismatch");
  }
  const Embedding e = make_embedding(spec);
  return error_fn(spec.error_fn_coeffs, e.error_projection * features);
}

Eigen::VectorXd latent_to_features(const SyntheticEnvSpec& spec,
                                   const Eigen::Ref<const Eigen::VectorXd>& z) {
  spec.validate();
  if (z.size() != spec.latent_dim()) {
    throw InvalidInput("latent_to_features: latent dimension mismatch");
  }
  return make_embedding(spec).latent_to_features * z;
}

double trajectory_cte(Eigen::Index i) {
  const double t = static_cast<double>(i);
  return 2.5 * std::sin(2.0 * std::numbers::pi * t / 700.0) +
         0.8 * std::sin(2.0 * std::numbers::pi * t / 130.0 + 0.3);
}

Dataset generate_environment(const SyntheticEnvSpec& spec, Eigen::Index n) {
  spec.validate();
  if (n < 1) throw InvalidInput("generate_environment: n must be >= 1");
  const Embedding e = make_embedding(spec);
  const Eigen::Index L = spec.latent_dim();
  const Eigen::Index d = spec.feature_dim;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> component(
      0, spec.mixture_means.size() - 1);

  Dataset ds;
  ds.name = spec.name;
  ds.features.resize(n, d);
  ds.true_value.resize(n);
  ds.sensor_value.resize(n);
  Eigen::VectorXd z(L);
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t c = component(rng);
    for (Eigen::Index j = 0; j < L; ++j) {
      z(j) = spec.mixture_means[c](j) + spec.mixture_scales[c] * normal(rng);
    }
    x = e.latent_to_features * z;
    for (Eigen::Index j = 0; j < d; ++j) {
      x(j) += spec.feature_noise_std * normal(rng);
    }
    const double noise = spec.noise_std * normal(rng);
    ds.features.row(i) = x.transpose();
    ds.true_value(i) = trajectory_cte(i);
    ds.sensor_value(i) = ds.true_value(i) +
                         error_fn(spec.error_fn_coeffs, e.error_projection * x) +
                         noise;
  }
  return ds;
}

SyntheticEnvSpec nominal_environment(std::uint64_t seed) {
  SyntheticEnvSpec s;
  s.name = "nominal";
  s.mixture_means = {Eigen::Vector4d(0.0, 0.0, 0.0, 0.0),
                     Eigen::Vector4d(2.0, 1.0, -1.0, 0.0),
                     Eigen::Vector4d(-1.0, 2.0, 1.0, 1.0)};
  s.mixture_scales = {0.8, 0.8, 0.8};
  s.error_fn_coeffs = {0.2, 0.3, -0.2, 0.05, 0.04, 0.5, 1.6, 1.0};
  s.noise_std = 0.1;
  s.seed = seed;
  return s;
}

SyntheticEnvSpec shifted_environment(double shift, std::uint64_t seed) {
  SyntheticEnvSpec s = nominal_environment(seed);
  s.name = "shifted";
  const Eigen::Vector4d direction = Eigen::Vector4d(1.0, -1.0, 1.0, 1.0) / 2.0;
  for (auto& m : s.mixture_means) m += shift * direction;
  return s;
}

}  // namespace gpassure
