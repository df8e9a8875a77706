#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gpassure {

// Labeled sensor data from one environment. Row i of `features` is the LEC
// feature vector for the sample whose ground-truth cross-track error is
// true_value(i) and whose sensor estimate is sensor_value(i).
struct Dataset {
  std::string name;
  Eigen::MatrixXd features;     // n x d
  Eigen::VectorXd true_value;   // n, meters
  Eigen::VectorXd sensor_value; // n, meters

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  // sensor_value - true_value
  Eigen::VectorXd errors() const;
  Dataset subset(const std::vector<Eigen::Index>& rows) const;
  void validate() const;
};

// Text format, UTF-8 with LF endings:
//   <name>,<n>,<d>
//   <f_1>,...,<f_d>,<true_value>,<sensor_value>     (n lines)
// Reals use 17 significant digits so load(save(ds)) is value-exact.
void write_dataset(std::ostream& out, const Dataset& ds);
void save_dataset(const std::filesystem::path& path, const Dataset& ds);

// Throws FormatError naming the line (and field) at fault.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

// Seeded shuffle into (first, rest) with |first| = round(fraction * n). Each
// side keeps the original relative row order. Throws InvalidInput when either
// side would be empty.
std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double fraction,
                                          std::uint64_t seed);

}  // namespace gpassure
