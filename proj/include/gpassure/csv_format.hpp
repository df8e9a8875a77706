#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gpassure {

// Locale-independent decimal text with 17 significant digits, which
// round-trips every finite double exactly.
std::string format_real(double v);

// Parses a full field as a double; returns false on any trailing garbage.
bool parse_real(std::string_view field, double& out);

// Splits on ',' without trimming.
std::vector<std::string_view> split_fields(std::string_view line);

}  // namespace gpassure
