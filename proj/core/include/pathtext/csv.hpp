#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pathtext {

/// One parsed CSV record together with the 1-based line it started on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// RFC 4180 reader: comma separated, double-quoted fields may contain commas,
/// newlines, and doubled quotes. Blank lines are skipped. Throws FormatError
/// on an unterminated quoted field or stray characters after a closing quote.
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

}  // namespace pathtext
