#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netspread::csv {

/// One parsed comma-delimited file. `rows[i]` is data row i (header excluded);
/// `line_numbers[i]` is its 1-based line in the source text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  /// Index of `name` in the header, if present. Case-sensitive.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// Parses RFC 4180-style CSV: comma delimiter, optional double-quoted fields,
/// LF or CRLF line endings. Blank lines are skipped. Throws IngestError on an
/// unterminated quote, a missing header, or a ragged row.
Table parse(std::string_view text, std::string_view source = "input");

/// Reads a whole file into memory. Throws IngestError if it cannot be opened.
std::string read_file(const std::string& path);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

/// Joins fields with commas (escaping each) and appends LF.
std::string join_row(const std::vector<std::string>& fields);

/// Shortest decimal representation that round-trips to the same double.
std::string format_number(double value);

/// Strict numeric parse of a whole cell (surrounding blanks ignored).
std::optional<double> parse_number(std::string_view cell);

}  // namespace netspread::csv
