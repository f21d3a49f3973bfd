// Copyright 2026 The tabenc Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tabenc/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "tabenc/error.hpp"

namespace tabenc {

const Column* RawTable::find_column(std::string_view name) const {
  for (const auto& col : columns) {
    if (col.name == name) return &col;
  }
  return nullptr;
}

int RawTable::column_index(std::string_view name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

void RawTable::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& col : columns) {
    if (col.name.empty()) throw Error("column with empty name");
    if (!seen.insert(col.name).second)
      throw Error("duplicate column name: " + col.name);
    if (col.values.size() != n_rows || col.missing.size() != n_rows)
      throw Error("column length mismatch in " + col.name);
  }
}

bool is_missing_token(std::string_view text) {
  if (text.empty()) return true;
  if (text.size() == 2) {
    return (text[0] == 'n' || text[0] == 'N') &&
           (text[1] == 'a' || text[1] == 'A');
  }
  if (text.size() == 3) {
    return (text[0] == 'n' || text[0] == 'N') &&
           (text[1] == 'a' || text[1] == 'A') &&
           (text[2] == 'n' || text[2] == 'N');
  }
  return false;
}

std::optional<double> try_parse_number(std::string_view text) {
  size_t begin = 0, end = text.size();
  while (begin < end && (text[begin] == ' ' || text[begin] == '\t')) ++begin;
  while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
  if (begin == end) return std::nullopt;
  double value = 0.0;
  const char* first = text.data() + begin;
  const char* last = text.data() + end;
  // Leading '+' is common in hand-written CSVs; from_chars rejects it.
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_number(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

// Splits the stream into records of unquoted fields. Returns false at EOF
// with no further record.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 size_t& line_no) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string field;
  bool in_quotes = false;
  bool record_done = false;
  while (!record_done) {
    if (c == EOF) {
      if (in_quotes) throw Error("unterminated quoted field at end of input");
      fields.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        int peek = in.peek();
        if (peek == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_no;
        field.push_back(ch);
      }
    } else {
      switch (ch) {
        case '"':
          if (!field.empty())
            throw Error("stray quote in unquoted field at line " +
                        std::to_string(line_no));
          in_quotes = true;
          break;
        case ',':
          fields.push_back(std::move(field));
          field.clear();
          break;
        case '\r':
          if (in.peek() == '\n') in.get();
          ++line_no;
          fields.push_back(std::move(field));
          record_done = true;
          break;
        case '\n':
          ++line_no;
          fields.push_back(std::move(field));
          record_done = true;
          break;
        default:
          field.push_back(ch);
      }
    }
    if (!record_done) c = in.get();
  }
  return true;
}

}  // namespace

RawTable read_csv(std::istream& in) {
  // Strip a UTF-8 BOM if present.
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
    if (in.gcount() != 3 || bom[1] != char(0xBB) || bom[2] != char(0xBF))
      throw Error("bad byte-order mark");
  }

  size_t line_no = 1;
  std::vector<std::string> fields;
  if (!read_record(in, fields, line_no))
    throw Error("empty CSV: header row required");
  if (fields.size() == 1 && fields[0].empty())
    throw Error("empty CSV header");

  RawTable table;
  table.columns.resize(fields.size());
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].empty())
      throw Error("empty column name in header");
    if (!seen.insert(fields[i]).second)
      throw Error("duplicate column name: " + fields[i]);
    table.columns[i].name = fields[i];
  }

  const size_t n_cols = table.columns.size();
  while (read_record(in, fields, line_no)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != n_cols)
      throw Error("row at line " + std::to_string(line_no) + " has " +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(n_cols));
    for (size_t i = 0; i < n_cols; ++i) {
      const bool miss = is_missing_token(fields[i]);
      table.columns[i].missing.push_back(miss ? 1 : 0);
      table.columns[i].values.push_back(miss ? std::string() : fields[i]);
    }
    ++table.n_rows;
  }
  return table;
}

RawTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_csv(in);
}

namespace {

void write_field(std::ostream& out, const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(const RawTable& table, std::ostream& out) {
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    write_field(out, table.columns[i].name);
  }
  out << '\n';
  for (size_t r = 0; r < table.n_rows; ++r) {
    for (size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out << ',';
      const auto& col = table.columns[i];
      if (!col.missing[r]) write_field(out, col.values[r]);
    }
    out << '\n';
  }
}

void write_csv_file(const RawTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_csv(table, out);
}

}  // namespace tabenc
