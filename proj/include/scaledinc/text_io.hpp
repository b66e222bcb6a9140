#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace scaledinc::text {

// Splits a record. Lines containing a tab are split on tabs only so labels may
// carry spaces ("New York"); otherwise fields are whitespace separated.
std::vector<std::string> split_fields(std::string_view line);

// Splits on a single delimiter character, trimming surrounding blanks.
std::vector<std::string> split_on(std::string_view line, char delim);

std::string_view trim(std::string_view s);

// True for blank lines and lines whose first non-blank character is '#'.
bool is_skippable(std::string_view line);

// Formats with printf-style "%.<digits>g".
std::string format_general(double value, int significant_digits);
// Formats with printf-style "%.<decimals>f".
std::string format_fixed(double value, int decimals);

long long parse_integer(std::string_view field, const std::string& path, std::size_t line);
double parse_real(std::string_view field, const std::string& path, std::size_t line);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

// Reads every line, stripping a trailing '\r'.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace scaledinc::text
