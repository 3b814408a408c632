#include "cfgfolio/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cfgfolio/error.hpp"

namespace cfgfolio::csv {
namespace {

[[noreturn]] void Malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kMalformedRow,
              "line " + std::to_string(line) + ": " + what);
}

std::string JoinHeader(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

bool NeedsQuoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos ||
         (!field.empty() && (field.front() == ' ' || field.back() == ' '));
}

}  // namespace

std::vector<std::string> SplitLine(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      was_quoted = false;
    } else if (c == '"') {
      if (!current.empty() || was_quoted) Malformed(line_no, "stray quote");
      quoted = true;
      was_quoted = true;
    } else {
      if (was_quoted) Malformed(line_no, "text after closing quote");
      current += c;
    }
  }
  if (quoted) Malformed(line_no, "unterminated quote");
  fields.push_back(std::move(current));
  return fields;
}

std::vector<Row> ReadFile(const std::filesystem::path& path,
                          const std::vector<std::string>& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kMissingFile, "cannot open " + path.string());
  }
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    auto fields = SplitLine(line, line_no);
    if (!have_header) {
      if (fields != expected_header) {
        Malformed(line_no, "expected header '" + JoinHeader(expected_header) +
                               "', got '" + line + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      Malformed(line_no, "expected " + std::to_string(expected_header.size()) +
                             " fields, got " + std::to_string(fields.size()));
    }
    rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!have_header) Malformed(1, "missing header");
  return rows;
}

void WriteRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (!NeedsQuoting(f)) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

double ParseDouble(std::string_view text, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    Malformed(line, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t ParseInteger(std::string_view text, std::size_t line) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    Malformed(line, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t ParseCount(std::string_view text, std::size_t line) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    Malformed(line, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace cfgfolio::csv
