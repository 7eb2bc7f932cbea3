#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fengshui::text {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);
std::optional<bool> parse_bool(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delim);
// Splits into lines, dropping a trailing '\r' from each. A final line
// without a newline is still returned.
std::vector<std::string_view> lines(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace fengshui::text
