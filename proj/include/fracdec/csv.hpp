#pragma once

// Minimal RFC 4180-style CSV reading and writing: comma separator, optional
// double-quoted fields, LF or CRLF line endings. Blank lines are skipped.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracdec::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row

    /// Index of a header column (case-insensitive), or nullopt.
    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

/// Throws IngestionError on an empty input, an unterminated quote or a row
/// whose field count differs from the header's.
Table parse(std::string_view text);
/// Throws IngestionError if the file cannot be read.
Table read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

std::string_view trim(std::string_view s);
/// Parses a finite decimal number, surrounding whitespace allowed.
std::optional<double> parse_number(std::string_view s);

/// Shortest round-trip representation.
std::string format_number(double v);
std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

}  // namespace fracdec::csv
