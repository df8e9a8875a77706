#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpassure/dataset.hpp"

namespace gpassure {

// Stand-in for a simulator environment. Latent points z are drawn from an
// isotropic Gaussian mixture and embedded into feature space as
// x = A z + feature noise, where A (feature_dim x latent_dim) is fixed by
// embedding_seed. Environments sharing an embedding_seed live in the same
// feature space, so they differ only by their mixtures.
//
// The sensor error is a smooth function of x through two fixed unit
// projections u1, u2 (normalized so one latent unit moves u by about one):
//   c0 + c1 u1 + c2 u2 + c3 u1^2 + c4 u1 u2 + c5 sin(c6 u1 + c7 u2)
// plus N(0, noise_std^2).
struct SyntheticEnvSpec {
  std::string name = "nominal";
  std::vector<Eigen::VectorXd> mixture_means;
  std::vector<double> mixture_scales;
  std::vector<double> error_fn_coeffs;  // exactly 8
  double noise_std = 0.1;
  std::uint64_t seed = 0;
  Eigen::Index feature_dim = 64;
  double feature_noise_std = 0.05;
  std::uint64_t embedding_seed = 2019;

  Eigen::Index latent_dim() const {
    return mixture_means.empty() ? 0 : mixture_means.front().size();
  }
  void validate() const;
};

// Noise-free error for a feature vector under spec's embedding and coefficients.
double synthetic_error(const SyntheticEnvSpec& spec,
                       const Eigen::Ref<const Eigen::VectorXd>& features);

// Noise-free feature vector A z for a latent point z.
Eigen::VectorXd latent_to_features(const SyntheticEnvSpec& spec,
                                   const Eigen::Ref<const Eigen::VectorXd>& z);

// Ground-truth cross-track error along the synthetic trajectory at sample i.
double trajectory_cte(Eigen::Index i);

Dataset generate_environment(const SyntheticEnvSpec& spec, Eigen::Index n);

// Three-component mixture in a 4-D latent space, the training environment.
SyntheticEnvSpec nominal_environment(std::uint64_t seed);

// nominal_environment with every mixture mean moved `shift` latent units
// along a fixed unit direction.
SyntheticEnvSpec shifted_environment(double shift, std::uint64_t seed);

}  // namespace gpassure
