#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bw {

/// In-memory CSV table. Header row required; fields may be double-quoted
/// with embedded commas, quotes ("" escape) and newlines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
CsvTable read_csv_stream(std::istream& in, const std::string& origin);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Quote a field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

}  // namespace bw
