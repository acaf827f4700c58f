#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drseg {

// Minimal comma-separated parsing: no quoting, fields trimmed of surrounding
// whitespace. All file formats in this project are plain enough for that.
std::vector<std::string> split_csv_line(std::string_view line);

std::string_view trim(std::string_view s);

std::optional<double> parse_double(std::string_view s);

// Shortest decimal representation that round-trips the double.
std::string format_double(double v);

} // namespace drseg
