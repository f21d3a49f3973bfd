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

#ifndef TABENC_SCHEMA_HPP_
#define TABENC_SCHEMA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tabenc/table.hpp"

namespace tabenc {

enum class FeatureRole { kNumeric, kCategoric, kHighCardinality, kLabel };

std::string role_name(FeatureRole role);
FeatureRole role_from_name(const std::string& name);

/// Moments and order statistics of the finite entries of one column.
/// stddev is the population form (divide by N); quantiles interpolate
/// linearly between closest ranks.
struct NumericStats {
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double max = 0;
  double median = 0;
  double mad = 0;  // median absolute deviation about the median
  double skewness = 0;
  double q01 = 0;
  double q99 = 0;
  double q25 = 0;
  double q75 = 0;
  double outlier_fraction = 0;  // beyond median +/- 3*IQR
  double missing_fraction = 0;
};

/// Frequency table sorted by descending count, lexicographic-ascending
/// tie-break, so it is stable under row permutation.
struct CategoricStats {
  size_t unique_count = 0;
  std::vector<std::pair<std::string, size_t>> frequency_table;
  double missing_fraction = 0;
};

struct FeatureSchema {
  std::string name;
  FeatureRole role = FeatureRole::kCategoric;
  std::optional<NumericStats> numeric_stats;
  std::optional<CategoricStats> categoric_stats;
};

constexpr size_t kDefaultCardinalityThreshold = 255;

/// Assigns exactly one role per column: numeric iff every non-missing entry
/// parses as a finite number, categoric otherwise; categoric columns whose
/// unique count exceeds the threshold become high-cardinality; the label
/// column keeps the label role regardless of content.
std::vector<FeatureSchema> infer_schema(
    const RawTable& table, const std::optional<std::string>& label_name,
    size_t cardinality_threshold = kDefaultCardinalityThreshold);

/// Stats over the finite entries of `values`; NaN marks a missing cell.
/// Throws when no finite value exists.
NumericStats compute_numeric_stats(const std::vector<double>& values);

CategoricStats compute_categoric_stats(const std::vector<std::string>& values,
                                       const std::vector<uint8_t>& missing);

/// Linear interpolation between closest ranks of an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p);

/// Typed view of one feature: numeric role fills `numeric` (NaN never kept
/// once infill has run), categoric roles fill `text`. `missing` flags cells
/// that arrived as missing markers or failed numeric parsing.
struct FeatureData {
  std::vector<double> numeric;
  std::vector<std::string> text;
  std::vector<uint8_t> missing;
};

struct FeatureTable {
  std::vector<std::string> names;
  std::vector<FeatureData> features;
  size_t n_rows = 0;
};

/// Extracts typed columns per schema role. Unparseable cells in numeric
/// columns become missing.
FeatureTable extract_features(const RawTable& table,
                              const std::vector<FeatureSchema>& schema);

void to_json(nlohmann::json& j, const NumericStats& s);
void from_json(const nlohmann::json& j, NumericStats& s);
void to_json(nlohmann::json& j, const CategoricStats& s);
void from_json(const nlohmann::json& j, CategoricStats& s);

}  // namespace tabenc

#endif  // TABENC_SCHEMA_HPP_
