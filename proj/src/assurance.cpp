#include "gpassure/assurance.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "gpassure/errors.hpp"

namespace gpassure {
namespace {

void validate_prediction(const PredictiveDistribution& pred) {
  if (!std::isfinite(pred.mean) || !std::isfinite(pred.std) || pred.std < 0.0) {
    throw InvalidInput("predictive distribution needs finite mean and std >= 0");
  }
}

void validate_alarm_fraction(double alarm_fraction) {
  if (!(alarm_fraction > 0.0 && alarm_fraction < 1.0)) {
    throw InvalidInput("alarm fraction must be in (0, 1), got " +
                       std::to_string(alarm_fraction));
  }
}

}  // namespace

void AssuranceBound::validate() const {
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    throw InvalidInput("assurance bound needs lower < upper");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double error_pdf(const PredictiveDistribution& pred, double e) {
  validate_prediction(pred);
  if (pred.std == 0.0) {
    throw InvalidInput("error_pdf: zero-std prediction has no density");
  }
  const double z = (e - pred.mean) / pred.std;
  return std::exp(-0.5 * z * z) /
         (pred.std * std::sqrt(2.0 * std::numbers::pi));
}

double prob_within(const PredictiveDistribution& pred,
                   const AssuranceBound& b) {
  validate_prediction(pred);
  b.validate();
  if (pred.std == 0.0) {
    return (b.lower <= pred.mean && pred.mean <= b.upper) ? 1.0 : 0.0;
  }
  const double zl = (b.lower - pred.mean) / pred.std;
  const double zu = (b.upper - pred.mean) / pred.std;
  // Work in the lower tail where the CDF keeps its relative precision.
  if (zl > 0.0) return normal_cdf(-zl) - normal_cdf(-zu);
  return normal_cdf(zu) - normal_cdf(zl);
}

AssuranceBound credible_interval(const PredictiveDistribution& pred,
                                 double level) {
  validate_prediction(pred);
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidInput("credible_interval: level must be in (0, 1), got " +
                       std::to_string(level));
  }
  if (pred.std == 0.0) {
    throw InvalidInput(
        "credible_interval: zero-std prediction is a point mass with no "
        "interval");
  }
  // Phi(z) = (1 + level) / 2  <=>  z = sqrt(2) erfc^-1(1 - level)
  const double z = std::numbers::sqrt2 * boost::math::erfc_inv(1.0 - level);
  return AssuranceBound{pred.mean - z * pred.std, pred.mean + z * pred.std};
}

CalibrationStats calibration(std::span<const PredictiveDistribution> preds,
                             const Eigen::VectorXd& actual_errors) {
  if (preds.size() != static_cast<std::size_t>(actual_errors.size())) {
    throw InvalidInput("calibration: " + std::to_string(preds.size()) +
                       " predictions but " +
                       std::to_string(actual_errors.size()) + " actual errors");
  }
  if (preds.empty()) throw InvalidInput("calibration: no samples");
  std::size_t within1 = 0;
  std::size_t within2 = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    validate_prediction(preds[i]);
    const double dev = std::abs(actual_errors(static_cast<Eigen::Index>(i)) -
                                preds[i].mean);
    if (dev <= preds[i].std) ++within1;
    if (dev <= 2.0 * preds[i].std) ++within2;
  }
  const double n = static_cast<double>(preds.size());
  return CalibrationStats{preds.size(), within1 / n, within2 / n};
}

ShiftReference fit_shift_reference(std::span<const double> stds) {
  if (stds.size() < 2) {
    throw InvalidInput("fit_shift_reference: need at least 2 stds, got " +
                       std::to_string(stds.size()));
  }
  for (double s : stds) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InvalidInput("fit_shift_reference: stds must be finite and >= 0");
    }
  }
  const double n = static_cast<double>(stds.size());
  const double origin = stds[0];
  double shifted = 0.0;
  for (double s : stds) shifted += s - origin;
  const double mean = origin + shifted / n;
  double ss = 0.0;
  for (double s : stds) ss += (s - mean) * (s - mean);
  ShiftReference ref;
  ref.stds.assign(stds.begin(), stds.end());
  ref.mean_std = mean;
  ref.threshold = mean + 2.0 * std::sqrt(ss / n);
  return ref;
}

ShiftReference fit_shift_reference(
    std::span<const PredictiveDistribution> preds) {
  std::vector<double> stds;
  stds.reserve(preds.size());
  for (const auto& p : preds) stds.push_back(p.std);
  return fit_shift_reference(stds);
}

ShiftVerdict detect_shift(std::span<const PredictiveDistribution> window,
                          const ShiftReference& ref, double alarm_fraction) {
  if (window.empty()) throw InvalidInput("detect_shift: empty window");
  validate_alarm_fraction(alarm_fraction);
  std::size_t exceed = 0;
  for (const auto& p : window) {
    validate_prediction(p);
    if (p.std > ref.threshold) ++exceed;
  }
  ShiftVerdict v;
  v.window_size = window.size();
  v.exceed_fraction =
      static_cast<double>(exceed) / static_cast<double>(window.size());
  v.alarmed = v.exceed_fraction > alarm_fraction;
  return v;
}

std::vector<ShiftVerdict> monitor_stream(
    std::span<const PredictiveDistribution> stream, const ShiftReference& ref,
    std::size_t window_size, double alarm_fraction) {
  if (window_size < 1) throw InvalidInput("monitor: window size must be >= 1");
  if (window_size > stream.size()) {
    throw InvalidInput("monitor: window size " + std::to_string(window_size) +
                       " exceeds stream length " +
                       std::to_string(stream.size()));
  }
  validate_alarm_fraction(alarm_fraction);
  std::vector<ShiftVerdict> out;
  for (std::size_t start = 0; start + window_size <= stream.size();
       start += window_size) {
    out.push_back(
        detect_shift(stream.subspan(start, window_size), ref, alarm_fraction));
  }
  return out;
}

}  // namespace gpassure
