#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ideatrace {

// Shortest round-trip decimal form via std::to_chars. Every number the
// pipeline writes goes through here so that reruns are byte-identical.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Splits one CSV record. Handles double-quoted fields with embedded commas
// and "" escapes; no multi-line fields.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_quote(std::string_view field);

// Non-empty lines of a CSV file, each split into fields.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

std::vector<std::string> split_lines(std::string_view text);

int parse_int(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

}  // namespace ideatrace
