#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hvacsim::csv {

// Plain comma splitting; the formats used here never quote fields.
std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Shortest representation that parses back to the same double.
std::string format_double(double value);
// Fixed number of decimals, used for human-facing schedule files.
std::string format_fixed(double value, int decimals);

double parse_double(std::string_view field, std::string_view context);
long long parse_int(std::string_view field, std::string_view context);

std::string read_file(const std::filesystem::path& path);
// Writes atomically enough for our purposes: full content in one stream, LF endings.
void write_file(const std::filesystem::path& path, std::string_view content);

// Line iterator over file content that strips a trailing '\r' and skips empty lines.
std::vector<std::string_view> lines(std::string_view content);
// The views would dangle.
std::vector<std::string_view> lines(std::string&& content) = delete;

}  // namespace hvacsim::csv
