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

#ifndef TABENC_TABLE_HPP_
#define TABENC_TABLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabenc {

/// One raw column: cell text plus a missing mask. Cells flagged missing
/// keep an empty string payload.
struct Column {
  std::string name;
  std::vector<std::string> values;
  std::vector<uint8_t> missing;

  size_t size() const { return values.size(); }
};

/// A tidy table: one column per feature, one row per sample. All columns
/// share the same length and carry unique, non-empty names.
struct RawTable {
  std::vector<Column> columns;
  size_t n_rows = 0;

  const Column* find_column(std::string_view name) const;
  int column_index(std::string_view name) const;  // -1 when absent
  void validate() const;                          // throws on broken invariants
};

/// True for the cell spellings treated as missing on ingestion: the empty
/// field, "NA" and "NaN" (case-insensitive).
bool is_missing_token(std::string_view text);

/// Locale-independent full-string parse; rejects non-finite results.
std::optional<double> try_parse_number(std::string_view text);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_number(double value);

/// RFC 4180 reader: UTF-8, header row required, quoted fields with doubled
/// quotes, CRLF or LF record breaks. Missing markers per is_missing_token.
RawTable read_csv(std::istream& in);
RawTable read_csv_file(const std::string& path);

void write_csv(const RawTable& table, std::ostream& out);
void write_csv_file(const RawTable& table, const std::string& path);

}  // namespace tabenc

#endif  // TABENC_TABLE_HPP_
