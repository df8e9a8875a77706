#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpassure/assurance.hpp"
#include "gpassure/gp_regression.hpp"

namespace gpassure::cli {

enum class Command { kSynth, kFit, kPredict, kCalibrate, kMonitor, kExportPlotData };

struct RunConfig {
  Command command = Command::kFit;
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path model;
  std::filesystem::path reference;
  std::filesystem::path output;
  std::filesystem::path report;

  // fit
  std::optional<Eigen::Index> pca_dim;
  double variance_fraction = 0.95;
  Eigen::Index gp_samples = 600;
  std::optional<KernelGrid> grid;

  // monitor
  double alarm_fraction = kDefaultAlarmFraction;
  std::size_t window_size = kDefaultWindowSize;

  // synth
  Eigen::Index samples = 5600;
  std::string environment = "nominal";
  double shift = 0.0;
  std::optional<double> noise_std;
  std::string name;

  // export-plot-data
  int bins = 50;

  std::uint64_t seed = 0;
};

// "l1,l2,...;s1,...;n1,..." -> KernelGrid. Throws InvalidInput.
KernelGrid parse_grid(const std::string& text);

struct FitReport {
  Eigen::Index input_dim = 0;
  Eigen::Index pca_dim = 0;
  Eigen::Index gp_samples = 0;
  KernelParams params;
  double log_marginal_likelihood = 0.0;
};

struct MonitorSummary {
  double threshold = 0.0;
  std::size_t windows = 0;
  std::size_t alarmed_windows = 0;
  std::size_t unevaluated_tail = 0;
  double alarmed_fraction() const {
    return windows == 0 ? 0.0 : static_cast<double>(alarmed_windows) / windows;
  }
};

// Each command writes its files, prints a short human summary to `log` and
// throws on failure (InvalidInput / FormatError for bad input, anything else
// for numerical failure).
void cmd_synth(const RunConfig& cfg, std::ostream& log);
FitReport cmd_fit(const RunConfig& cfg, std::ostream& log);
void cmd_predict(const RunConfig& cfg, std::ostream& log);
CalibrationStats cmd_calibrate(const RunConfig& cfg, std::ostream& log);
MonitorSummary cmd_monitor(const RunConfig& cfg, std::ostream& log);
void cmd_export_plot_data(const RunConfig& cfg, std::ostream& log);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses argv-style arguments (args[0] is the program name), runs the
// command and maps errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace gpassure::cli
