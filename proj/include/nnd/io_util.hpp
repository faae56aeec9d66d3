// Small file/formatting helpers shared across the toolkit.
#pragma once

#include <filesystem>
#include <string>

namespace nnd {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

double parse_double(const std::string& text);

// Write via a temporary file and rename, so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace nnd
