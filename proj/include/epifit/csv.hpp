#pragma once

// Minimal RFC 4180 reader/writer: quoted fields, embedded commas, doubled
// quotes, CRLF line ends. Lines starting with '#' are comments.

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace epifit {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row (1-based)
  std::vector<std::string> comments;      // text after '#', in file order

  /// Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Splits one record; throws CsvError on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes the field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal that parses back to the same double.
std::string format_shortest(double value);

/// Value rounded to `digits` significant digits (%.{digits}g).
std::string format_significant(double value, int digits = 6);

/// Strict decimal parse of the whole field; nullopt on failure.
std::optional<double> parse_number(std::string_view field);

}  // namespace epifit
