#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pairfinder {

using Date = std::chrono::year_month_day;

// ISO-8601 YYYY-MM-DD. Returns nullopt for anything else, including
// impossible calendar dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

// Shortest decimal string that parses back to the identical double.
std::string format_double(double value);
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view line, char delimiter);

// Splits on '\n', dropping a trailing '\r' from each line. A final line
// without a terminating newline is still returned.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// File-name-safe rendering: [A-Za-z0-9.-] kept, everything else becomes '_'.
std::string sanitize_filename(std::string_view text);

}  // namespace pairfinder
