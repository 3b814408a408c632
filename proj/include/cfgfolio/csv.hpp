#pragma once

// Minimal RFC 4180 style CSV reading and writing: comma separated, optional
// double-quote quoting with "" escapes, LF or CRLF line endings.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cfgfolio::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

// Reads the header and all non-blank data rows. Throws kMissingFile when the
// file cannot be opened and kMalformedRow on unbalanced quotes or when the
// header does not equal `expected_header`.
std::vector<Row> ReadFile(const std::filesystem::path& path,
                          const std::vector<std::string>& expected_header);

std::vector<std::string> SplitLine(std::string_view line, std::size_t line_no);

void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

// Field parsers. All throw kMalformedRow tagged with `line`.
double ParseDouble(std::string_view text, std::size_t line);
std::uint64_t ParseCount(std::string_view text, std::size_t line);
std::int64_t ParseInteger(std::string_view text, std::size_t line);

}  // namespace cfgfolio::csv
