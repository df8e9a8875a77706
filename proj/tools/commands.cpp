#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "gpassure/csv_format.hpp"
#include "gpassure/dataset.hpp"
#include "gpassure/errors.hpp"
#include "gpassure/model_io.hpp"
#include "gpassure/pipeline.hpp"
#include "gpassure/synthetic.hpp"

namespace gpassure::cli {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.empty()) throw InvalidInput("missing output path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  return out;
}

const std::filesystem::path& single_input(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) {
    throw InvalidInput("expected exactly one --input dataset");
  }
  return cfg.inputs.front();
}

GPModel require_model(const RunConfig& cfg) {
  if (cfg.model.empty()) throw InvalidInput("missing --model");
  return load_model(cfg.model);
}

void require_dim(const GPModel& m, const Dataset& ds) {
  if (ds.dim() != m.input_dim()) {
    throw InvalidInput("dataset '" + ds.name + "' has " +
                       std::to_string(ds.dim()) + " features but the model "
                       "expects " + std::to_string(m.input_dim()));
  }
}

std::vector<double> parse_axis(const std::string& text) {
  std::vector<double> out;
  for (auto field : split_fields(text)) {
    double v = 0.0;
    if (!parse_real(field, v)) {
      throw InvalidInput("grid: cannot parse '" + std::string(field) + "'");
    }
    out.push_back(v);
  }
  return out;
}

void write_fit_report(std::ostream& out, const FitReport& r) {
  out << "input_dim,pca_dim,gp_samples,lengthscale,signal_variance,"
         "noise_variance,log_marginal_likelihood\n"
      << r.input_dim << ',' << r.pca_dim << ',' << r.gp_samples << ','
      << format_real(r.params.lengthscale) << ','
      << format_real(r.params.signal_variance) << ','
      << format_real(r.params.noise_variance) << ','
      << format_real(r.log_marginal_likelihood) << '\n';
}

}  // namespace

KernelGrid parse_grid(const std::string& text) {
  std::vector<std::string> axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) axes.push_back(part);
  if (axes.size() != 3) {
    throw InvalidInput(
        "grid: expected 'lengthscales;signal_variances;noise_variances'");
  }
  KernelGrid g{parse_axis(axes[0]), parse_axis(axes[1]), parse_axis(axes[2])};
  g.validate();
  return g;
}

void cmd_synth(const RunConfig& cfg, std::ostream& log) {
  SyntheticEnvSpec spec;
  if (cfg.environment == "nominal") {
    spec = nominal_environment(cfg.seed);
  } else if (cfg.environment == "shifted") {
    spec = shifted_environment(cfg.shift, cfg.seed);
  } else {
    throw InvalidInput("unknown environment '" + cfg.environment +
                       "' (expected nominal or shifted)");
  }
  if (cfg.noise_std) spec.noise_std = *cfg.noise_std;
  if (!cfg.name.empty()) spec.name = cfg.name;
  const Dataset ds = generate_environment(spec, cfg.samples);
  auto out = open_output(cfg.output);
  write_dataset(out, ds);
  log << "wrote " << ds.size() << " samples (" << ds.dim()
      << " features) of environment '" << ds.name << "' to "
      << cfg.output.string() << '\n';
}

FitReport cmd_fit(const RunConfig& cfg, std::ostream& log) {
  const Dataset data = load_dataset(single_input(cfg));
  if (cfg.output.empty()) throw InvalidInput("missing --output model path");

  PipelineOptions opts;
  opts.pca_dim = cfg.pca_dim;
  opts.variance_fraction = cfg.variance_fraction;
  opts.gp_samples = cfg.gp_samples;
  if (cfg.grid) opts.grid = *cfg.grid;
  opts.seed = cfg.seed;
  const PipelineResult result = fit_pipeline(data, opts);

  save_model(cfg.output, result.model);

  FitReport report;
  report.input_dim = result.model.input_dim();
  report.pca_dim = result.model.model_dim();
  report.gp_samples = result.model.training_set().size();
  report.params = result.model.params();
  report.log_marginal_likelihood = result.log_marginal_likelihood;
  write_fit_report(log, report);
  if (!cfg.report.empty()) {
    auto out = open_output(cfg.report);
    write_fit_report(out, report);
  }
  return report;
}

void cmd_predict(const RunConfig& cfg, std::ostream& log) {
  const GPModel model = require_model(cfg);
  const Dataset ds = load_dataset(single_input(cfg));
  require_dim(model, ds);
  const auto preds = predict_all(model, ds.features);
  auto out = open_output(cfg.output);
  out << "index,pred_mean,pred_std\n";
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out << i << ',' << format_real(preds[i].mean) << ','
        << format_real(preds[i].std) << '\n';
  }
  log << "predicted " << preds.size() << " samples of '" << ds.name << "'\n";
}

CalibrationStats cmd_calibrate(const RunConfig& cfg, std::ostream& log) {
  const GPModel model = require_model(cfg);
  const Dataset ds = load_dataset(single_input(cfg));
  require_dim(model, ds);
  const auto preds = predict_all(model, ds.features);
  const CalibrationStats stats = calibration(preds, ds.errors());
  if (!cfg.output.empty()) {
    auto out = open_output(cfg.output);
    out << "dataset,n,coverage_1sigma,coverage_2sigma,nominal_1sigma,"
           "nominal_2sigma\n"
        << ds.name << ',' << stats.n << ',' << format_real(stats.coverage_1sigma)
        << ',' << format_real(stats.coverage_2sigma) << ','
        << format_real(kNominalCoverage1Sigma) << ','
        << format_real(kNominalCoverage2Sigma) << '\n';
  }
  log << "calibration on '" << ds.name << "' (n = " << stats.n << "): "
      << 100.0 * stats.coverage_1sigma << "% within 1 sigma (nominal 68.3%), "
      << 100.0 * stats.coverage_2sigma << "% within 2 sigma (nominal 95.4%)\n";
  return stats;
}

MonitorSummary cmd_monitor(const RunConfig& cfg, std::ostream& log) {
  const GPModel model = require_model(cfg);
  if (cfg.reference.empty()) throw InvalidInput("missing --reference dataset");
  const Dataset reference = load_dataset(cfg.reference);
  const Dataset monitored = load_dataset(single_input(cfg));
  require_dim(model, reference);
  require_dim(model, monitored);
  if (cfg.window_size < 1 ||
      cfg.window_size > static_cast<std::size_t>(monitored.size())) {
    throw InvalidInput("window size " + std::to_string(cfg.window_size) +
                       " outside [1, " + std::to_string(monitored.size()) +
                       "]");
  }

  const ShiftReference ref =
      fit_shift_reference(predict_all(model, reference.features));
  const auto stream = predict_all(model, monitored.features);
  const auto verdicts =
      monitor_stream(stream, ref, cfg.window_size, cfg.alarm_fraction);

  MonitorSummary summary;
  summary.threshold = ref.threshold;
  summary.windows = verdicts.size();
  summary.unevaluated_tail = stream.size() % cfg.window_size;
  for (const auto& v : verdicts) summary.alarmed_windows += v.alarmed ? 1 : 0;

  if (!cfg.output.empty()) {
    auto out = open_output(cfg.output);
    out << "window,start,size,exceed_fraction,alarmed\n";
    for (std::size_t w = 0; w < verdicts.size(); ++w) {
      out << w << ',' << w * cfg.window_size << ',' << verdicts[w].window_size
          << ',' << format_real(verdicts[w].exceed_fraction) << ','
          << (verdicts[w].alarmed ? 1 : 0) << '\n';
    }
  }
  if (!cfg.report.empty()) {
    auto out = open_output(cfg.report);
    out << "reference_mean_std,threshold,windows,alarmed_windows,"
           "alarmed_fraction,unevaluated_tail\n"
        << format_real(ref.mean_std) << ',' << format_real(ref.threshold) << ','
        << summary.windows << ',' << summary.alarmed_windows << ','
        << format_real(summary.alarmed_fraction()) << ','
        << summary.unevaluated_tail << '\n';
  }
  log << "shift threshold " << ref.threshold << " (reference '"
      << reference.name << "'); " << summary.alarmed_windows << " of "
      << summary.windows << " windows of '" << monitored.name
      << "' alarmed (" << 100.0 * summary.alarmed_fraction() << "%)\n";
  return summary;
}

void cmd_export_plot_data(const RunConfig& cfg, std::ostream& log) {
  const GPModel model = require_model(cfg);
  if (cfg.inputs.empty()) throw InvalidInput("missing --input dataset");
  if (cfg.output.empty()) throw InvalidInput("missing --output directory");
  if (cfg.bins < 1) throw InvalidInput("--bins must be >= 1");
  std::filesystem::create_directories(cfg.output);

  std::vector<Dataset> datasets;
  std::set<std::string> names;
  for (const auto& path : cfg.inputs) {
    datasets.push_back(load_dataset(path));
    require_dim(model, datasets.back());
    if (!names.insert(datasets.back().name).second) {
      throw InvalidInput("duplicate dataset name '" + datasets.back().name +
                         "'");
    }
  }

  std::vector<std::vector<PredictiveDistribution>> all_preds;
  double max_std = 0.0;
  for (const auto& ds : datasets) {
    all_preds.push_back(predict_all(model, ds.features));
    for (const auto& p : all_preds.back()) max_std = std::max(max_std, p.std);
  }

  for (std::size_t k = 0; k < datasets.size(); ++k) {
    const Dataset& ds = datasets[k];
    const Eigen::VectorXd actual = ds.errors();
    auto out = open_output(cfg.output / (ds.name + "_predictions.csv"));
    out << "index,actual_error,pred_mean,pred_std,lower_2sigma,upper_2sigma\n";
    for (std::size_t i = 0; i < all_preds[k].size(); ++i) {
      const auto& p = all_preds[k][i];
      out << i << ',' << format_real(actual(static_cast<Eigen::Index>(i)))
          << ',' << format_real(p.mean) << ',' << format_real(p.std) << ','
          << format_real(p.mean - 2.0 * p.std) << ','
          << format_real(p.mean + 2.0 * p.std) << '\n';
    }
  }

  // One shared binning over [0, max std] so the densities are comparable.
  const double width = max_std > 0.0 ? max_std / cfg.bins : 1.0;
  auto hist = open_output(cfg.output / "std_histogram.csv");
  hist << "dataset,bin,bin_lower,bin_upper,count,density\n";
  for (std::size_t k = 0; k < datasets.size(); ++k) {
    std::vector<std::size_t> counts(cfg.bins, 0);
    for (const auto& p : all_preds[k]) {
      auto b = static_cast<std::size_t>(p.std / width);
      counts[std::min<std::size_t>(b, cfg.bins - 1)] += 1;
    }
    const double n = static_cast<double>(all_preds[k].size());
    for (int b = 0; b < cfg.bins; ++b) {
      hist << datasets[k].name << ',' << b << ',' << format_real(b * width)
           << ',' << format_real((b + 1) * width) << ',' << counts[b] << ','
           << format_real(counts[b] / (n * width)) << '\n';
    }
  }

  if (!cfg.reference.empty()) {
    const Dataset reference = load_dataset(cfg.reference);
    require_dim(model, reference);
    const ShiftReference ref =
        fit_shift_reference(predict_all(model, reference.features));
    auto out = open_output(cfg.output / "shift_reference.csv");
    out << "dataset,mean_std,threshold\n"
        << reference.name << ',' << format_real(ref.mean_std) << ','
        << format_real(ref.threshold) << '\n';
  }
  log << "exported plot data for " << datasets.size() << " dataset(s) to "
      << cfg.output.string() << '\n';
}

}  // namespace gpassure::cli
