#pragma once

// Small text helpers shared by the parsers and writers: CSV rows, unsigned
// integer cells, and UTC timestamps.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votewire/core.hpp"

namespace votewire::text {

struct CsvRow {
  std::size_t line = 0;  // 1-based line the row starts on
  std::vector<std::string> cells;
};

// RFC 4180 style: comma separated, double-quoted cells may contain commas,
// quotes ("") and newlines. Blank lines are skipped. Throws ParseError with
// kMalformedRecord on an unterminated quote.
std::vector<CsvRow> ReadCsv(std::string_view data);

// Quotes the cell only when it needs it.
std::string CsvCell(std::string_view cell);
std::string CsvLine(const std::vector<std::string>& cells);

std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

std::optional<std::uint64_t> ParseUnsigned(std::string_view s);
std::optional<std::int64_t> ParseSigned(std::string_view s);

// Epoch seconds ("1092614400") or RFC 3339 ("2004-08-16T00:00:00Z",
// offsets and fractional seconds accepted, fractions truncated).
std::optional<Timestamp> ParseTimestamp(std::string_view s);
// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatRfc3339(Timestamp t);

// Shortest representation that round-trips through strtod.
std::string FormatDouble(double v);
// Fixed notation with the given number of decimals.
std::string FormatFixed(double v, int decimals);

}  // namespace votewire::text
