#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace culturenov::io {

/// Throws Error{Io} when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Nine significant digits, the fixed float format of every emitted table.
std::string format_double(double x);

/// Quotes a CSV field when it contains a comma, quote, or newline.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

/// Splits text into lines, dropping '\r' and a trailing empty line.
std::vector<std::string_view> lines(std::string_view text);

std::string trim(std::string_view s);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace culturenov::io
