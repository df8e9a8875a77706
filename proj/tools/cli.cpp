#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gpassure/errors.hpp"

namespace gpassure::cli {
namespace {

void add_seed(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
}

void add_model(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "Fitted GP model file")->required();
}

void add_single_input(CLI::App* sub, RunConfig& cfg, const char* what) {
  sub->add_option("--input", cfg.inputs, what)->required()->expected(1);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  std::string grid_text;

  CLI::App app{"Gaussian-process sensor-error assurance toolkit"};
  app.set_config("--config", "", "Optional TOML/INI config; flags override");
  app.require_subcommand(1);

  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic environment dataset");
  synth->add_option("--output", cfg.output, "Dataset file to write")
      ->required();
  synth->add_option("--samples", cfg.samples, "Number of samples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--env", cfg.environment, "nominal or shifted")
      ->capture_default_str()
      ->check(CLI::IsMember({"nominal", "shifted"}));
  synth->add_option("--shift", cfg.shift,
                    "Latent-space shift of the mixture means (shifted env)")
      ->capture_default_str();
  synth->add_option("--noise-std", cfg.noise_std, "Sensor noise std override")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--name", cfg.name, "Environment label");
  add_seed(synth, cfg);

  auto* fit = app.add_subcommand(
      "fit", "standardize -> PCA -> k-means selection -> GP fit");
  add_single_input(fit, cfg, "Training-environment dataset");
  fit->add_option("--output", cfg.output, "Model file to write")->required();
  fit->add_option("--report", cfg.report, "Also write the fit report here");
  fit->add_option("--pca-dim", cfg.pca_dim, "Fixed PCA dimension")
      ->check(CLI::PositiveNumber);
  fit->add_option("--variance-fraction", cfg.variance_fraction,
                  "Explained variance used to pick the PCA dimension")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fit->add_option("--gp-samples", cfg.gp_samples,
                  "Number of GP training samples (k-means clusters)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fit->add_option("--grid", grid_text,
                  "Hyperparameter grid 'l1,l2,..;s1,..;n1,..'");
  add_seed(fit, cfg);

  auto* predict = app.add_subcommand(
      "predict", "Predictive mean and std of the sensor error per sample");
  add_model(predict, cfg);
  add_single_input(predict, cfg, "Dataset to predict");
  predict->add_option("--output", cfg.output, "CSV to write")->required();

  auto* calibrate = app.add_subcommand(
      "calibrate", "1-sigma / 2-sigma coverage on a held-out dataset");
  add_model(calibrate, cfg);
  add_single_input(calibrate, cfg, "Held-out dataset");
  calibrate->add_option("--output", cfg.output, "CSV record to write");

  auto* monitor = app.add_subcommand(
      "monitor", "Windowed dataset-shift monitor on predictive std");
  add_model(monitor, cfg);
  monitor->add_option("--reference", cfg.reference,
                      "In-distribution dataset defining the threshold")
      ->required();
  add_single_input(monitor, cfg, "Monitored dataset (stream order)");
  monitor->add_option("--window", cfg.window_size, "Window size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  monitor->add_option("--alarm-fraction", cfg.alarm_fraction,
                      "Alarm when more than this fraction exceeds threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  monitor->add_option("--output", cfg.output, "Per-window verdict CSV");
  monitor->add_option("--report", cfg.report, "Summary CSV");

  auto* export_plot = app.add_subcommand(
      "export-plot-data", "Per-sample predictions and std histograms");
  add_model(export_plot, cfg);
  export_plot->add_option("--input", cfg.inputs, "Datasets (repeatable)")
      ->required();
  export_plot->add_option("--output", cfg.output, "Output directory")
      ->required();
  export_plot->add_option("--reference", cfg.reference,
                          "Dataset defining the 2-sigma std threshold");
  export_plot->add_option("--bins", cfg.bins, "Histogram bins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    if (*synth) {
      cfg.command = Command::kSynth;
      cmd_synth(cfg, out);
    } else if (*fit) {
      cfg.command = Command::kFit;
      cmd_fit(cfg, out);
    } else if (*predict) {
      cfg.command = Command::kPredict;
      cmd_predict(cfg, out);
    } else if (*calibrate) {
      cfg.command = Command::kCalibrate;
      cmd_calibrate(cfg, out);
    } else if (*monitor) {
      cfg.command = Command::kMonitor;
      cmd_monitor(cfg, out);
    } else if (*export_plot) {
      cfg.command = Command::kExportPlotData;
      cmd_export_plot_data(cfg, out);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace gpassure::cli
