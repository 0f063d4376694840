#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nids {

/// Shortest decimal form that round-trips the exact double value.
std::string format_double(double v);

/// Parses a double; returns false on trailing garbage or empty input.
bool parse_double(std::string_view s, double& out);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view line, char sep);
std::string to_lower(std::string_view s);

/// Writes content to path via a temp file in the same directory + rename,
/// so readers never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace nids
