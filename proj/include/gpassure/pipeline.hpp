#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpassure/dataset.hpp"
#include "gpassure/feature_pipeline.hpp"
#include "gpassure/gp_regression.hpp"

namespace gpassure {

struct PipelineOptions {
  // Fixed PCA dimension; when unset the smallest r reaching variance_fraction
  // (capped at max_pca_dim) is used.
  std::optional<Eigen::Index> pca_dim;
  double variance_fraction = kDefaultVarianceFraction;
  Eigen::Index max_pca_dim = kDefaultMaxPcaDim;
  Eigen::Index gp_samples = 600;
  KernelGrid grid = KernelGrid::default_grid();
  std::uint64_t seed = 0;
};

struct PipelineResult {
  GPModel model;
  std::vector<Eigen::Index> selected;  // dataset rows used for GP training
  double log_marginal_likelihood = 0.0;
};

// standardize -> PCA -> k-means selection of gp_samples rows -> grid search
// -> fit. Standardization and PCA see only `data`; sensor errors are centered
// by their mean over the selected rows.
PipelineResult fit_pipeline(const Dataset& data, const PipelineOptions& opts);

}  // namespace gpassure
