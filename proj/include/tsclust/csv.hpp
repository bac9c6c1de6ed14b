#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tsclust::csv {

/// One parsed record with its 1-based physical line number and raw text.
struct Record {
    std::size_t line_number = 0;
    std::string raw;
    std::vector<std::string> fields;
};

/// Splits one CSV line (RFC 4180 quoting, comma delimiter).
std::vector<std::string> split_line(std::string_view line);

/// Reads every non-empty line of a CSV file. Throws DataError if the file
/// cannot be opened.
std::vector<Record> read_file(const std::filesystem::path& path);

/// Quotes a field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

/// Formats a real with 9 significant digits ("%.9g").
std::string format_real(double value);

/// Strict parse of a whole field as a finite real; nullopt on any garbage.
std::optional<double> parse_real(std::string_view text);

/// Writes content to `path` through a temporary sibling file and an atomic
/// rename, so readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

}  // namespace tsclust::csv
