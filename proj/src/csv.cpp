#include "bw/csv.hpp"

#include <fstream>
#include <sstream>

#include "bw/errors.hpp"

namespace bw {

int CsvTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::vector<std::vector<std::string>> parse_records(std::istream& in,
                                                    const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && in.peek() == '\n') in.get();
      fields.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(fields));
      fields.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) throw DataError(origin + ": unterminated quoted field");
  if (!field.empty() || !fields.empty()) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  if (!any) throw DataError(origin + ": empty input");
  return records;
}

}  // namespace

CsvTable read_csv_stream(std::istream& in, const std::string& origin) {
  auto records = parse_records(in, origin);
  // Drop trailing fully-empty lines.
  while (!records.empty() && records.back().size() == 1 &&
         records.back()[0].empty()) {
    records.pop_back();
  }
  if (records.empty()) throw DataError(origin + ": empty input");
  CsvTable t;
  t.header = std::move(records.front());
  records.erase(records.begin());
  t.rows = std::move(records);
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return read_csv_stream(in, path);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto emit_row = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  };
  emit_row(table.header);
  for (const auto& r : table.rows) emit_row(r);
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  write_csv(out, table);
}

}  // namespace bw
