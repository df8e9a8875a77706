#include "gpassure/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "gpassure/csv_format.hpp"
#include "gpassure/errors.hpp"

namespace gpassure {
namespace {

std::string where(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

bool parse_count(std::string_view field, long long& out) {
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), out);
  return !field.empty() && res.ec == std::errc() &&
         res.ptr == field.data() + field.size();
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Eigen::VectorXd Dataset::errors() const { return sensor_value - true_value; }

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.name = name;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), dim());
  out.true_value.resize(static_cast<Eigen::Index>(rows.size()));
  out.sensor_value.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    if (r < 0 || r >= size()) {
      throw InvalidInput("dataset subset: row " + std::to_string(r) +
                         " out of range");
    }
    const auto dst = static_cast<Eigen::Index>(i);
    out.features.row(dst) = features.row(r);
    out.true_value(dst) = true_value(r);
    out.sensor_value(dst) = sensor_value(r);
  }
  return out;
}

void Dataset::validate() const {
  if (name.empty() || name.find_first_of(",\n\r") != std::string::npos) {
    throw InvalidInput("dataset: name must be non-empty without ',' or newline");
  }
  if (size() < 1 || dim() < 1) {
    throw InvalidInput("dataset: need n >= 1 and d >= 1");
  }
  if (true_value.size() != size() || sensor_value.size() != size()) {
    throw InvalidInput("dataset: feature, true_value and sensor_value lengths "
                       "differ");
  }
  if (!features.allFinite()) throw InvalidInput("dataset: non-finite feature");
  if (!errors().allFinite()) {
    throw InvalidInput("dataset: non-finite sensor error");
  }
}

void write_dataset(std::ostream& out, const Dataset& ds) {
  ds.validate();
  out << ds.name << ',' << ds.size() << ',' << ds.dim() << '\n';
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      out << format_real(ds.features(i, j)) << ',';
    }
    out << format_real(ds.true_value(i)) << ','
        << format_real(ds.sensor_value(i)) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  write_dataset(out, ds);
  if (!out) throw InvalidInput("failed writing " + path.string());
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw FormatError("line 1: missing header '<name>,<n>,<d>'");
  }
  strip_cr(line);
  const auto header = split_fields(line);
  if (header.size() != 3) {
    throw FormatError("line 1: header needs 3 fields '<name>,<n>,<d>', got " +
                      std::to_string(header.size()));
  }
  long long n = 0;
  long long d = 0;
  if (header[0].empty()) throw FormatError("line 1, field 1: empty name");
  if (!parse_count(header[1], n) || n < 1) {
    throw FormatError("line 1, field 2: n must be an integer >= 1, got '" +
                      std::string(header[1]) + "'");
  }
  if (!parse_count(header[2], d) || d < 1) {
    throw FormatError("line 1, field 3: d must be an integer >= 1, got '" +
                      std::string(header[2]) + "'");
  }

  Dataset ds;
  ds.name = std::string(header[0]);
  ds.features.resize(n, d);
  ds.true_value.resize(n);
  ds.sensor_value.resize(n);
  const std::size_t expected_fields = static_cast<std::size_t>(d) + 2;

  for (Eigen::Index i = 0; i < n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw FormatError(where(line_no) + ": expected " + std::to_string(n) +
                        " records, found " + std::to_string(i));
    }
    strip_cr(line);
    const auto fields = split_fields(line);
    if (fields.size() != expected_fields) {
      throw FormatError(where(line_no) + ": expected " +
                        std::to_string(expected_fields) + " fields (d = " +
                        std::to_string(d) + "), got " +
                        std::to_string(fields.size()));
    }
    for (std::size_t f = 0; f < fields.size(); ++f) {
      double v = 0.0;
      if (!parse_real(fields[f], v) || !std::isfinite(v)) {
        throw FormatError(where(line_no) + ", field " + std::to_string(f + 1) +
                          ": not a finite real '" + std::string(fields[f]) +
                          "'");
      }
      if (f < static_cast<std::size_t>(d)) {
        ds.features(i, static_cast<Eigen::Index>(f)) = v;
      } else if (f == static_cast<std::size_t>(d)) {
        ds.true_value(i) = v;
      } else {
        ds.sensor_value(i) = v;
      }
    }
    if (!std::isfinite(ds.sensor_value(i) - ds.true_value(i))) {
      throw FormatError(where(line_no) + ": sensor error is not finite");
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (!line.empty()) {
      throw FormatError(where(line_no) + ": more records than the header's n = " +
                        std::to_string(n));
    }
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open dataset " + path.string());
  try {
    return read_dataset(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& ds, double fraction,
                                          std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidInput("split_holdout: fraction must be in (0, 1)");
  }
  const Eigen::Index n = ds.size();
  const auto first_n =
      static_cast<Eigen::Index>(std::llround(fraction * static_cast<double>(n)));
  if (first_n < 1 || first_n >= n) {
    throw InvalidInput("split_holdout: fraction " + std::to_string(fraction) +
                       " of " + std::to_string(n) +
                       " rows leaves one side empty");
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Eigen::Index> first(order.begin(), order.begin() + first_n);
  std::vector<Eigen::Index> rest(order.begin() + first_n, order.end());
  std::sort(first.begin(), first.end());
  std::sort(rest.begin(), rest.end());
  return {ds.subset(first), ds.subset(rest)};
}

}  // namespace gpassure
