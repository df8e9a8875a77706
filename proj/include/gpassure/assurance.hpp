#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gpassure/gp_regression.hpp"

namespace gpassure {

// Interval on the sensor error, either end may be infinite. lower < upper.
struct AssuranceBound {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  void validate() const;
};

// Standard normal CDF.
double normal_cdf(double z);

// Density of the predicted sensor error at e. This is the error-PDF assurance
// measure; a zero-std prediction has no density and throws InvalidInput.
double error_pdf(const PredictiveDistribution& pred, double e);

// Posterior probability that the sensor error lies in [lower, upper]. A zero
// std is treated as a point mass at the mean.
double prob_within(const PredictiveDistribution& pred, const AssuranceBound& b);

// Equal-tailed interval mean +- z std with Phi(z) = (1 + level) / 2.
// level must be in (0, 1) and std must be positive.
AssuranceBound credible_interval(const PredictiveDistribution& pred,
                                 double level);

struct CalibrationStats {
  std::size_t n = 0;
  double coverage_1sigma = 0.0;
  double coverage_2sigma = 0.0;
};

inline constexpr double kNominalCoverage1Sigma = 0.6826894921370859;
inline constexpr double kNominalCoverage2Sigma = 0.9544997361036416;

// Fraction of actual errors with |actual - mean| <= 1 std and <= 2 std.
CalibrationStats calibration(std::span<const PredictiveDistribution> preds,
                             const Eigen::VectorXd& actual_errors);

// Predictive stds on a reference (in-distribution) environment and the alarm
// threshold mean + 2 * population std.
struct ShiftReference {
  std::vector<double> stds;
  double mean_std = 0.0;
  double threshold = 0.0;
};

ShiftReference fit_shift_reference(std::span<const double> stds);
ShiftReference fit_shift_reference(
    std::span<const PredictiveDistribution> preds);

inline constexpr double kDefaultAlarmFraction = 0.5;
inline constexpr std::size_t kDefaultWindowSize = 100;

struct ShiftVerdict {
  std::size_t window_size = 0;
  double exceed_fraction = 0.0;
  bool alarmed = false;
};

// Alarms when strictly more than alarm_fraction of the window's stds exceed
// the reference threshold.
ShiftVerdict detect_shift(std::span<const PredictiveDistribution> window,
                          const ShiftReference& ref, double alarm_fraction);

// Runs detect_shift over consecutive non-overlapping windows of window_size.
// Trailing samples that do not fill a whole window are not evaluated.
std::vector<ShiftVerdict> monitor_stream(
    std::span<const PredictiveDistribution> stream, const ShiftReference& ref,
    std::size_t window_size, double alarm_fraction);

}  // namespace gpassure
