#include "gpassure/pipeline.hpp"

#include <string>

#include "gpassure/errors.hpp"

namespace gpassure {
namespace {

// Runs one pipeline stage and prefixes any error with the stage name while
// keeping the exception category.
template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  const std::string prefix = std::string(name) + ": ";
  try {
    return body();
  } catch (const InvalidInput& e) {
    throw InvalidInput(prefix + e.what());
  } catch (const FitError& e) {
    throw FitError(prefix + e.what());
  } catch (const SelectionError& e) {
    throw SelectionError(prefix + e.what());
  }
}

}  // namespace

PipelineResult fit_pipeline(const Dataset& data, const PipelineOptions& opts) {
  data.validate();
  const Eigen::Index n = data.size();
  if (opts.gp_samples < 1 || opts.gp_samples > n) {
    throw InvalidInput("GP sample count " + std::to_string(opts.gp_samples) +
                       " outside [1, " + std::to_string(n) + "]");
  }

  FeatureProjection proj;
  const Eigen::MatrixXd standardized = stage("standardize", [&] {
    proj.standardization = standardize_fit(data.features);
    return proj.standardization.apply(data.features);
  });
  const Eigen::Index r = stage("pca", [&] {
    const Eigen::Index dim =
        opts.pca_dim ? *opts.pca_dim
                     : choose_pca_dim(standardized, opts.variance_fraction,
                                      opts.max_pca_dim);
    proj.pca = pca_fit(standardized, dim);
    return dim;
  });
  const Eigen::MatrixXd reduced = pca_transform(proj.pca, standardized);

  const Eigen::VectorXd errors = data.errors();
  PipelineResult result{GPModel{}, {}, 0.0};
  result.selected = stage("select training samples", [&] {
    return select_gp_training(reduced, errors, opts.gp_samples, opts.seed);
  });

  TrainingSet ts;
  ts.inputs.resize(opts.gp_samples, r);
  ts.targets.resize(opts.gp_samples);
  for (std::size_t i = 0; i < result.selected.size(); ++i) {
    const auto row = result.selected[i];
    ts.inputs.row(static_cast<Eigen::Index>(i)) = reduced.row(row);
    ts.targets(static_cast<Eigen::Index>(i)) = errors(row);
  }
  proj.target_offset = ts.targets.mean();
  ts.targets.array() -= proj.target_offset;

  const KernelParams params = stage("select hyperparameters", [&] {
    return select_hyperparameters(ts, opts.grid);
  });
  result.model = stage("fit", [&] {
    return fit(std::move(ts), params, std::move(proj));
  });
  result.log_marginal_likelihood = result.model.log_marginal_likelihood();
  return result;
}

}  // namespace gpassure
