#pragma once

#include <filesystem>
#include <iosfwd>

#include "gpassure/gp_regression.hpp"

namespace gpassure {

inline constexpr const char* kModelFormat = "gpassure-model";
inline constexpr int kModelFormatVersion = 1;

// JSON document holding format tag and version, dimensions, kernel params
// (noise as used, jitter included), training inputs/targets and the feature
// projection. Reals are written in shortest round-trip form, so loading
// restores every stored value exactly; the Cholesky factor is recomputed.
void write_model(std::ostream& out, const GPModel& m);
void save_model(const std::filesystem::path& path, const GPModel& m);

// Throws FormatError for malformed or unsupported documents.
GPModel read_model(std::istream& in);
GPModel load_model(const std::filesystem::path& path);

}  // namespace gpassure
