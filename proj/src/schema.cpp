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

#include "tabenc/schema.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "tabenc/error.hpp"

namespace tabenc {

std::string role_name(FeatureRole role) {
  switch (role) {
    case FeatureRole::kNumeric: return "numeric";
    case FeatureRole::kCategoric: return "categoric";
    case FeatureRole::kHighCardinality: return "high_cardinality";
    case FeatureRole::kLabel: return "label";
  }
  throw Error("unreachable role");
}

FeatureRole role_from_name(const std::string& name) {
  if (name == "numeric") return FeatureRole::kNumeric;
  if (name == "categoric") return FeatureRole::kCategoric;
  if (name == "high_cardinality") return FeatureRole::kHighCardinality;
  if (name == "label") return FeatureRole::kLabel;
  throw Error("unknown feature role: " + name);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

NumericStats compute_numeric_stats(const std::vector<double>& values) {
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty())
    throw std::invalid_argument("numeric stats need at least one finite value");

  NumericStats s;
  const double n = static_cast<double>(finite.size());
  s.missing_fraction =
      values.empty() ? 0.0 : 1.0 - n / static_cast<double>(values.size());

  double sum = 0;
  for (double v : finite) sum += v;
  s.mean = sum / n;

  double m2 = 0, m3 = 0;
  for (double v : finite) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  s.stddev = std::sqrt(m2);
  s.skewness = s.stddev > 0 ? m3 / (s.stddev * s.stddev * s.stddev) : 0.0;

  std::vector<double> sorted = finite;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  if (s.min == s.max) {
    // Constant data: summation rounding can leave a spurious ~1e-16 spread.
    s.stddev = 0.0;
    s.skewness = 0.0;
    s.mean = s.min;
  }
  s.median = quantile_sorted(sorted, 0.5);
  s.q01 = quantile_sorted(sorted, 0.01);
  s.q99 = quantile_sorted(sorted, 0.99);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q75 = quantile_sorted(sorted, 0.75);

  std::vector<double> dev;
  dev.reserve(sorted.size());
  for (double v : sorted) dev.push_back(std::fabs(v - s.median));
  std::sort(dev.begin(), dev.end());
  s.mad = quantile_sorted(dev, 0.5);

  const double iqr = s.q75 - s.q25;
  size_t outliers = 0;
  for (double v : finite) {
    if (std::fabs(v - s.median) > 3.0 * iqr) ++outliers;
  }
  s.outlier_fraction = static_cast<double>(outliers) / n;
  return s;
}

CategoricStats compute_categoric_stats(const std::vector<std::string>& values,
                                       const std::vector<uint8_t>& missing) {
  CategoricStats s;
  std::map<std::string, size_t> counts;
  size_t n_missing = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if ((i < missing.size() && missing[i]) || values[i].empty()) {
      // Empty payloads are the missing token (infill leaves them behind).
      ++n_missing;
    } else {
      ++counts[values[i]];
    }
  }
  s.missing_fraction =
      values.empty() ? 0.0
                     : static_cast<double>(n_missing) /
                           static_cast<double>(values.size());
  s.unique_count = counts.size();
  s.frequency_table.assign(counts.begin(), counts.end());
  std::sort(s.frequency_table.begin(), s.frequency_table.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return s;
}

std::vector<FeatureSchema> infer_schema(
    const RawTable& table, const std::optional<std::string>& label_name,
    size_t cardinality_threshold) {
  if (table.columns.empty() || table.n_rows == 0)
    throw std::invalid_argument("cannot infer schema of an empty table");
  table.validate();
  if (label_name && table.find_column(*label_name) == nullptr)
    throw std::invalid_argument("label column not found: " + *label_name);

  std::vector<FeatureSchema> schema;
  schema.reserve(table.columns.size());
  for (const auto& col : table.columns) {
    FeatureSchema fs;
    fs.name = col.name;

    if (label_name && col.name == *label_name) {
      fs.role = FeatureRole::kLabel;
      fs.categoric_stats = compute_categoric_stats(col.values, col.missing);
      schema.push_back(std::move(fs));
      continue;
    }

    bool all_numeric = true;
    bool any_present = false;
    std::vector<double> parsed(col.size(),
                               std::numeric_limits<double>::quiet_NaN());
    for (size_t r = 0; r < col.size(); ++r) {
      if (col.missing[r]) continue;
      any_present = true;
      auto v = try_parse_number(col.values[r]);
      if (!v) {
        all_numeric = false;
        break;
      }
      parsed[r] = *v;
    }

    // A fully-missing column carries no numeric evidence; treat it as an
    // empty categoric feature so stats stay well-defined.
    if (all_numeric && any_present) {
      fs.role = FeatureRole::kNumeric;
      fs.numeric_stats = compute_numeric_stats(parsed);
    } else {
      fs.categoric_stats = compute_categoric_stats(col.values, col.missing);
      fs.role = fs.categoric_stats->unique_count > cardinality_threshold
                    ? FeatureRole::kHighCardinality
                    : FeatureRole::kCategoric;
    }
    schema.push_back(std::move(fs));
  }
  return schema;
}

FeatureTable extract_features(const RawTable& table,
                              const std::vector<FeatureSchema>& schema) {
  FeatureTable ft;
  ft.n_rows = table.n_rows;
  for (const auto& fs : schema) {
    const Column* col = table.find_column(fs.name);
    if (col == nullptr) throw Error("column missing from table: " + fs.name);
    FeatureData fd;
    fd.missing.assign(table.n_rows, 0);
    if (fs.role == FeatureRole::kNumeric) {
      fd.numeric.assign(table.n_rows,
                        std::numeric_limits<double>::quiet_NaN());
      for (size_t r = 0; r < table.n_rows; ++r) {
        if (col->missing[r]) {
          fd.missing[r] = 1;
          continue;
        }
        auto v = try_parse_number(col->values[r]);
        if (v) {
          fd.numeric[r] = *v;
        } else {
          fd.missing[r] = 1;  // type violation: becomes missing, then infilled
        }
      }
    } else {
      fd.text.assign(table.n_rows, std::string());
      for (size_t r = 0; r < table.n_rows; ++r) {
        if (col->missing[r]) {
          fd.missing[r] = 1;
        } else {
          fd.text[r] = col->values[r];
        }
      }
    }
    ft.names.push_back(fs.name);
    ft.features.push_back(std::move(fd));
  }
  return ft;
}

void to_json(nlohmann::json& j, const NumericStats& s) {
  j = nlohmann::json{{"mean", s.mean},
                     {"stddev", s.stddev},
                     {"min", s.min},
                     {"max", s.max},
                     {"median", s.median},
                     {"mad", s.mad},
                     {"skewness", s.skewness},
                     {"q01", s.q01},
                     {"q99", s.q99},
                     {"q25", s.q25},
                     {"q75", s.q75},
                     {"outlier_fraction", s.outlier_fraction},
                     {"missing_fraction", s.missing_fraction}};
}

void from_json(const nlohmann::json& j, NumericStats& s) {
  j.at("mean").get_to(s.mean);
  j.at("stddev").get_to(s.stddev);
  j.at("min").get_to(s.min);
  j.at("max").get_to(s.max);
  j.at("median").get_to(s.median);
  j.at("mad").get_to(s.mad);
  j.at("skewness").get_to(s.skewness);
  j.at("q01").get_to(s.q01);
  j.at("q99").get_to(s.q99);
  j.at("q25").get_to(s.q25);
  j.at("q75").get_to(s.q75);
  j.at("outlier_fraction").get_to(s.outlier_fraction);
  j.at("missing_fraction").get_to(s.missing_fraction);
}

void to_json(nlohmann::json& j, const CategoricStats& s) {
  nlohmann::json freq = nlohmann::json::array();
  for (const auto& [cat, count] : s.frequency_table)
    freq.push_back(nlohmann::json::array({cat, count}));
  j = nlohmann::json{{"unique_count", s.unique_count},
                     {"frequency_table", std::move(freq)},
                     {"missing_fraction", s.missing_fraction}};
}

void from_json(const nlohmann::json& j, CategoricStats& s) {
  j.at("unique_count").get_to(s.unique_count);
  s.frequency_table.clear();
  for (const auto& e : j.at("frequency_table"))
    s.frequency_table.emplace_back(e.at(0).get<std::string>(),
                                   e.at(1).get<size_t>());
  j.at("missing_fraction").get_to(s.missing_fraction);
}

}  // namespace tabenc
