#pragma once

#include <string>
#include <vector>

namespace fairfit::csv {

// A parsed delimited text file: header plus string cells, RFC-4180 quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t ncol() const { return header.size(); }
  std::size_t nrow() const { return rows.size(); }
  // Index of a header column, -1 if absent.
  long column_index(const std::string& name) const;
};

Table read_file(const std::string& path);
Table parse(const std::string& text, const std::string& origin = "<string>");

// Quotes fields containing separators/quotes/newlines per RFC 4180.
std::string escape_field(const std::string& field);

// Writes doubles with 17 significant digits so values round-trip exactly.
std::string format_double(double x);

void write_file(const std::string& path, const Table& table);

}  // namespace fairfit::csv
