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

#include "tabenc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "tabenc/error.hpp"
#include "tabenc/rng.hpp"

namespace tabenc {

namespace {

constexpr double kDriftEps = 1e-12;

bool known_leg(const std::vector<std::string>& legs, const std::string& leg) {
  return std::find(legs.begin(), legs.end(), leg) != legs.end();
}

}  // namespace

const std::vector<std::string>& numeric_scenario_legs() {
  static const std::vector<std::string> kLegs = {
      "default", "qttf", "powertransform", "mnmx", "mnm3", "binstransform"};
  return kLegs;
}

const std::vector<std::string>& categoric_scenario_legs() {
  static const std::vector<std::string> kLegs = {"default", "onht", "ord3",
                                                 "ordl",    "hsh2", "or19"};
  return kLegs;
}

std::string Scenario::name() const {
  if (numeric_leg == "default" && categoric_leg == "default") return "default";
  if (categoric_leg == "default") return "numeric:" + numeric_leg;
  if (numeric_leg == "default") return "categoric:" + categoric_leg;
  return "numeric:" + numeric_leg + "+categoric:" + categoric_leg;
}

Scenario parse_scenario(const std::string& name) {
  Scenario s;
  if (name == "default") return s;
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t plus = name.find('+', start);
    parts.push_back(name.substr(
        start, plus == std::string::npos ? std::string::npos : plus - start));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  if (parts.empty() || parts.size() > 2)
    throw std::invalid_argument("unknown scenario: " + name);
  bool saw_numeric = false;
  bool saw_categoric = false;
  for (const auto& part : parts) {
    if (part.rfind("numeric:", 0) == 0) {
      if (saw_numeric)
        throw std::invalid_argument("unknown scenario: " + name);
      saw_numeric = true;
      s.numeric_leg = part.substr(8);
      if (!known_leg(numeric_scenario_legs(), s.numeric_leg))
        throw std::invalid_argument("unknown numeric leg: " + s.numeric_leg);
    } else if (part.rfind("categoric:", 0) == 0) {
      if (saw_categoric)
        throw std::invalid_argument("unknown scenario: " + name);
      saw_categoric = true;
      s.categoric_leg = part.substr(10);
      if (!known_leg(categoric_scenario_legs(), s.categoric_leg))
        throw std::invalid_argument("unknown categoric leg: " +
                                    s.categoric_leg);
    } else {
      throw std::invalid_argument("unknown scenario: " + name);
    }
  }
  return s;
}

namespace {

TransformPlanNode numeric_plan_for(const std::string& leg,
                                   const FeatureSchema& fs) {
  TransformPlanNode node;
  node.numeric = true;
  node.keep_output = true;
  if (leg == "default") {
    node.nkind = NumericKind::kNmbr;
  } else if (leg == "qttf") {
    node.nkind = NumericKind::kQttf;
  } else if (leg == "mnmx") {
    node.nkind = NumericKind::kMnmx;
  } else if (leg == "mnm3") {
    node.nkind = NumericKind::kMnm3;
  } else if (leg == "binstransform") {
    node.nkind = NumericKind::kNmbr;
    TransformPlanNode child;
    child.numeric = true;
    child.nkind = NumericKind::kBins;
    child.keep_output = true;
    node.children.push_back(std::move(child));
  } else if (leg == "powertransform") {
    if (!fs.numeric_stats)
      throw std::invalid_argument("schema entry lacks numeric stats: " +
                                  fs.name);
    node.nkind = select_powertransform(*fs.numeric_stats).chosen;
  } else {
    throw std::invalid_argument("unknown numeric leg: " + leg);
  }
  return node;
}

TransformPlanNode categoric_plan_for(const std::string& leg) {
  TransformPlanNode node;
  node.numeric = false;
  node.keep_output = true;
  if (leg == "default") {
    node.ckind = CategoricKind::kB1010;
  } else if (leg == "onht") {
    node.ckind = CategoricKind::kOnht;
  } else if (leg == "ord3") {
    node.ckind = CategoricKind::kOrd3;
  } else if (leg == "ordl") {
    node.ckind = CategoricKind::kOrdl;
  } else if (leg == "hsh2") {
    node.ckind = CategoricKind::kHsh2;
  } else if (leg == "or19") {
    node.ckind = CategoricKind::kOr19;
  } else {
    throw std::invalid_argument("unknown categoric leg: " + leg);
  }
  return node;
}

}  // namespace

std::vector<TransformPlanNode> build_plan(
    const std::vector<FeatureSchema>& schema, const Scenario& scenario) {
  if (!known_leg(numeric_scenario_legs(), scenario.numeric_leg))
    throw std::invalid_argument("unknown numeric leg: " + scenario.numeric_leg);
  if (!known_leg(categoric_scenario_legs(), scenario.categoric_leg))
    throw std::invalid_argument("unknown categoric leg: " +
                                scenario.categoric_leg);
  std::vector<TransformPlanNode> plans;
  plans.reserve(schema.size());
  for (const auto& fs : schema) {
    switch (fs.role) {
      case FeatureRole::kNumeric:
        plans.push_back(numeric_plan_for(scenario.numeric_leg, fs));
        break;
      case FeatureRole::kCategoric:
        plans.push_back(categoric_plan_for(scenario.categoric_leg));
        break;
      case FeatureRole::kHighCardinality: {
        // Hashing caps the width whatever the scenario asks for.
        TransformPlanNode node;
        node.numeric = false;
        node.ckind = CategoricKind::kHsh2;
        plans.push_back(node);
        break;
      }
      case FeatureRole::kLabel: {
        TransformPlanNode node;
        node.numeric = false;
        node.ckind = CategoricKind::kOrd3;
        plans.push_back(node);
        break;
      }
    }
  }
  return plans;
}

namespace {

// Column names of one node's own output block (empty when not kept).
std::vector<std::string> block_names(const std::string& feature,
                                     const FittedNode& node) {
  std::vector<std::string> out;
  if (!node.keep_output) return out;
  const std::string kind = node.numeric
                               ? numeric_kind_name(node.nbasis.kind)
                               : categoric_kind_name(node.cbasis.kind);
  const size_t width = node.numeric ? numeric_width(node.nbasis.kind)
                                    : categoric_width(node.cbasis);
  const std::string base = feature + "_" + kind;
  if (width == 1) {
    out.push_back(base);
  } else {
    for (size_t j = 0; j < width; ++j)
      out.push_back(base + "_" + std::to_string(j));
  }
  return out;
}

void append_node_names(const std::string& feature, const FittedNode& node,
                       std::vector<std::string>* out) {
  const std::vector<std::string> own = block_names(feature, node);
  out->insert(out->end(), own.begin(), own.end());
  for (const auto& child : node.children)
    append_node_names(feature, child, out);
}

void encode_node_into(const FittedNode& node, const FeatureData& data,
                      ColMatrix* cols, size_t* next_col) {
  if (node.keep_output) {
    if (node.numeric) {
      const size_t width = numeric_width(node.nbasis.kind);
      std::vector<double> scratch(width);
      for (size_t r = 0; r < data.numeric.size(); ++r) {
        encode_numeric(node.nbasis, data.numeric[r], scratch.data());
        for (size_t j = 0; j < width; ++j)
          (*cols)[*next_col + j][r] = scratch[j];
      }
      *next_col += width;
    } else {
      const size_t width = categoric_width(node.cbasis);
      if (width > 0) {
        std::vector<double> scratch(width);
        for (size_t r = 0; r < data.text.size(); ++r) {
          const bool miss = r < data.missing.size() && data.missing[r] != 0;
          encode_categoric(node.cbasis, data.text[r], miss, scratch.data());
          for (size_t j = 0; j < width; ++j)
            (*cols)[*next_col + j][r] = scratch[j];
        }
      }
      *next_col += width;
    }
  }
  for (const auto& child : node.children)
    encode_node_into(child, data, cols, next_col);
}

FittedNode fit_node(const TransformPlanNode& plan, const FeatureData& data) {
  FittedNode fitted;
  fitted.numeric = plan.numeric;
  fitted.keep_output = plan.keep_output;
  if (plan.numeric) {
    const NumericStats stats = compute_numeric_stats(data.numeric);
    fitted.nbasis = fit_numeric(plan.nkind, stats, data.numeric);
  } else {
    fitted.cbasis = fit_categoric(plan.ckind, data.text, data.missing);
  }
  fitted.children.reserve(plan.children.size());
  for (const auto& child : plan.children)
    fitted.children.push_back(fit_node(child, data));
  return fitted;
}

// Rewrites plan nodes whose encoder cannot be fit on the (infilled) train
// sample: box-cox falls back to its robust mad3 sibling, the parsed
// encoding to plain binarization.
void guard_node(TransformPlanNode* node, const FeatureData& data,
                const std::string& feature,
                std::vector<std::string>* warnings) {
  if (node->numeric && node->nkind == NumericKind::kBxcx) {
    size_t positive = 0;
    for (double v : data.numeric)
      if (v > 0.0) ++positive;
    if (data.numeric.size() < 8 || positive != data.numeric.size()) {
      node->nkind = NumericKind::kMad3;
      warnings->push_back("feature " + feature +
                          ": box-cox needs at least 8 strictly positive "
                          "values; falling back to mad3");
    }
  }
  if (!node->numeric && node->ckind == CategoricKind::kOr19) {
    std::set<std::string> uniq;
    for (size_t i = 0; i < data.text.size(); ++i) {
      if (i < data.missing.size() && data.missing[i]) continue;
      if (data.text[i].empty()) continue;
      uniq.insert(data.text[i]);
      if (uniq.size() >= 2) break;
    }
    if (uniq.size() < 2) {
      node->ckind = CategoricKind::kB1010;
      warnings->push_back("feature " + feature +
                          ": parsed encoding needs at least 2 distinct "
                          "values; falling back to 1010");
    }
  }
  for (auto& child : node->children)
    guard_node(&child, data, feature, warnings);
}

RawTable take_rows(const RawTable& table, const std::vector<size_t>& rows) {
  RawTable out;
  out.n_rows = rows.size();
  out.columns.reserve(table.columns.size());
  for (const auto& col : table.columns) {
    Column c;
    c.name = col.name;
    c.values.reserve(rows.size());
    c.missing.reserve(rows.size());
    for (size_t r : rows) {
      c.values.push_back(col.values[r]);
      c.missing.push_back(col.missing[r]);
    }
    out.columns.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<std::string> encoded_column_names(const TransformRecord& record) {
  std::vector<std::string> names;
  for (size_t i = 0; i < record.schema.size(); ++i) {
    append_node_names(record.schema[i].name, record.bases[i], &names);
    if (record.infill.indicator)
      names.push_back(record.schema[i].name + "_miss");
  }
  return names;
}

void write_encoded_csv(const EncodedTable& table,
                       const std::string& label_name,
                       const std::string& path) {
  RawTable raw;
  raw.n_rows = table.n_rows;
  raw.columns.reserve(table.names.size() + (table.has_labels ? 1 : 0));
  for (size_t c = 0; c < table.names.size(); ++c) {
    Column col;
    col.name = table.names[c];
    col.missing.assign(table.n_rows, 0);
    col.values.reserve(table.n_rows);
    for (size_t r = 0; r < table.n_rows; ++r)
      col.values.push_back(format_number(table.cols[c][r]));
    raw.columns.push_back(std::move(col));
  }
  if (table.has_labels) {
    Column col;
    col.name = label_name + "_ord3";
    col.missing.assign(table.n_rows, 0);
    col.values.reserve(table.n_rows);
    for (size_t r = 0; r < table.n_rows; ++r)
      col.values.push_back(std::to_string(table.labels[r]));
    raw.columns.push_back(std::move(col));
  }
  write_csv_file(raw, path);
}

SplitResult stratified_split(const std::vector<std::string>& labels,
                             const std::vector<uint8_t>& missing,
                             double fraction, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 0.5))
    throw std::invalid_argument("validation fraction must lie in [0, 0.5]");
  if (!missing.empty() && missing.size() != labels.size())
    throw std::invalid_argument("labels and missing mask disagree in length");

  SplitResult out;
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < labels.size(); ++i) {
    if ((i < missing.size() && missing[i]) || labels[i].empty()) {
      out.dropped_rows.push_back(i);
      continue;
    }
    groups[labels[i]].push_back(i);
  }
  size_t kept = 0;
  for (const auto& [name, rows] : groups) kept += rows.size();
  if (kept == 0) return out;

  if (groups.size() < 2) {
    out.stratified = false;
    std::vector<size_t> rows = groups.begin()->second;
    Rng rng(mix_seed(seed, 1));
    rng.shuffle(rows);
    size_t quota = static_cast<size_t>(fraction * static_cast<double>(kept));
    if (quota >= rows.size()) quota = rows.size() - 1;
    for (size_t i = 0; i < rows.size(); ++i)
      (i < quota ? out.valid_rows : out.train_rows).push_back(rows[i]);
  } else {
    const size_t target =
        static_cast<size_t>(fraction * static_cast<double>(kept));
    struct ClassQuota {
      const std::string* name;
      size_t count;
      size_t quota;
      double remainder;
    };
    std::vector<ClassQuota> quotas;
    quotas.reserve(groups.size());
    size_t assigned = 0;
    for (const auto& [name, rows] : groups) {
      const double exact = fraction * static_cast<double>(rows.size());
      const size_t base = static_cast<size_t>(exact);
      quotas.push_back({&name, rows.size(), base, exact - base});
      assigned += base;
    }
    // Largest remainder, but never drain a class out of the train side.
    size_t leftover = target > assigned ? target - assigned : 0;
    std::vector<size_t> order(quotas.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (quotas[a].remainder != quotas[b].remainder)
        return quotas[a].remainder > quotas[b].remainder;
      return *quotas[a].name < *quotas[b].name;
    });
    for (size_t idx : order) {
      if (leftover == 0) break;
      if (quotas[idx].quota + 2 <= quotas[idx].count) {
        ++quotas[idx].quota;
        --leftover;
      }
    }
    Rng rng(mix_seed(seed, 1));
    size_t qi = 0;
    for (auto& [name, rows] : groups) {
      rng.shuffle(rows);
      const size_t quota = quotas[qi++].quota;
      for (size_t i = 0; i < rows.size(); ++i)
        (i < quota ? out.valid_rows : out.train_rows).push_back(rows[i]);
    }
  }
  std::sort(out.train_rows.begin(), out.train_rows.end());
  std::sort(out.valid_rows.begin(), out.valid_rows.end());
  return out;
}

FitResult fit_pipeline(const RawTable& table, const std::string& label_name,
                       const Scenario& scenario, double validation_fraction,
                       uint64_t seed, InfillStrategy infill, bool indicator) {
  table.validate();
  if (!(validation_fraction >= 0.0 && validation_fraction <= 0.5))
    throw std::invalid_argument("validation fraction must lie in [0, 0.5]");
  const Column* label_col = table.find_column(label_name);
  if (label_col == nullptr)
    throw std::invalid_argument("label column not found: " + label_name);
  if (!known_leg(numeric_scenario_legs(), scenario.numeric_leg))
    throw std::invalid_argument("unknown numeric leg: " + scenario.numeric_leg);
  if (!known_leg(categoric_scenario_legs(), scenario.categoric_leg))
    throw std::invalid_argument("unknown categoric leg: " +
                                scenario.categoric_leg);

  FitResult result;
  SplitResult split = stratified_split(label_col->values, label_col->missing,
                                       validation_fraction, mix_seed(seed, 0));
  if (!split.dropped_rows.empty())
    result.warnings.push_back(std::to_string(split.dropped_rows.size()) +
                              " rows dropped: missing label");
  if (!split.stratified)
    result.warnings.push_back(
        "single label class; validation split is unstratified");

  const RawTable train_slice = take_rows(table, split.train_rows);
  const RawTable valid_slice = take_rows(table, split.valid_rows);

  // Everything downstream sees only the train partition.
  const std::vector<FeatureSchema> schema =
      infer_schema(train_slice, label_name);
  const std::vector<TransformPlanNode> plans = build_plan(schema, scenario);

  TransformRecord record;
  record.scenario = scenario.name();
  record.seed = seed;
  record.label_name = label_name;

  std::vector<TransformPlanNode> feature_plans;
  for (size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].role == FeatureRole::kLabel) continue;
    record.schema.push_back(schema[i]);
    feature_plans.push_back(plans[i]);
  }
  if (record.schema.empty())
    throw std::invalid_argument("table has no feature columns");

  const FeatureTable train_feats = extract_features(train_slice, record.schema);
  record.infill = plan_infill(record.schema, infill, train_feats, indicator,
                              mix_seed(seed, 1));
  const InfillResult infilled = apply_infill(record.infill, train_feats);

  record.plans.reserve(feature_plans.size());
  record.bases.reserve(feature_plans.size());
  for (size_t i = 0; i < feature_plans.size(); ++i) {
    TransformPlanNode plan = feature_plans[i];
    guard_node(&plan, infilled.table.features[i], record.schema[i].name,
               &result.warnings);
    record.bases.push_back(fit_node(plan, infilled.table.features[i]));
    record.plans.push_back(std::move(plan));
  }

  const Column* train_label = train_slice.find_column(label_name);
  record.label_basis = fit_categoric(CategoricKind::kOrd3, train_label->values,
                                     train_label->missing);

  // Encoding both partitions through the apply path makes the record
  // round-trip invariant hold by construction.
  ApplyResult train_apply = apply_pipeline(record, train_slice);
  ApplyResult valid_apply = apply_pipeline(record, valid_slice);
  result.train = std::move(train_apply.table);
  result.validation = std::move(valid_apply.table);
  result.record = std::move(record);
  result.train_rows = std::move(split.train_rows);
  result.valid_rows = std::move(split.valid_rows);
  return result;
}

ApplyResult apply_pipeline(const TransformRecord& record,
                           const RawTable& table) {
  table.validate();
  if (record.schema.size() != record.bases.size() ||
      record.schema.size() != record.plans.size())
    throw CorruptPayloadError("record arrays are misaligned");

  ApplyResult result;
  std::unordered_set<std::string> known;
  for (const auto& fs : record.schema) known.insert(fs.name);
  known.insert(record.label_name);
  for (const auto& col : table.columns) {
    if (!known.count(col.name))
      result.warnings.push_back("ignoring unknown column: " + col.name);
  }

  const FeatureTable feats = extract_features(table, record.schema);
  const InfillResult infilled = apply_infill(record.infill, feats);

  EncodedTable out;
  out.n_rows = table.n_rows;
  out.names = encoded_column_names(record);
  out.cols.assign(out.names.size(),
                  std::vector<double>(table.n_rows, 0.0));
  size_t next_col = 0;
  for (size_t i = 0; i < record.schema.size(); ++i) {
    encode_node_into(record.bases[i], infilled.table.features[i], &out.cols,
                     &next_col);
    if (record.infill.indicator) {
      out.cols[next_col] = infilled.indicators[i];
      ++next_col;
    }
  }

  const Column* label_col = table.find_column(record.label_name);
  if (label_col != nullptr) {
    out.has_labels = true;
    out.labels.resize(table.n_rows);
    for (size_t r = 0; r < table.n_rows; ++r) {
      out.labels[r] = encode_ordinal(record.label_basis, label_col->values[r],
                                     label_col->missing[r] != 0);
    }
  }
  result.table = std::move(out);
  return result;
}

namespace {

const FittedNode* first_invertible(const FittedNode& node) {
  if (node.keep_output) {
    if (node.numeric) {
      if (!node.nbasis.degenerate) return &node;
    } else if (node.cbasis.kind != CategoricKind::kHsh2) {
      return &node;
    }
  }
  for (const auto& child : node.children) {
    if (const FittedNode* hit = first_invertible(child)) return hit;
  }
  return nullptr;
}

double parse_encoded_cell(const Column& col, size_t row) {
  if (col.missing[row])
    throw MalformedCodeError("encoded cell is missing: " + col.name);
  const auto v = try_parse_number(col.values[row]);
  if (!v)
    throw MalformedCodeError("encoded cell is not numeric: " +
                             col.values[row]);
  return *v;
}

}  // namespace

RawTable invert_pipeline(const TransformRecord& record,
                         const RawTable& encoded,
                         const std::vector<std::string>& feature_names) {
  encoded.validate();
  RawTable out;
  out.n_rows = encoded.n_rows;
  std::unordered_set<std::string> requested;
  for (const auto& name : feature_names) {
    if (!requested.insert(name).second)
      throw std::invalid_argument("feature requested twice: " + name);

    Column rec;
    rec.name = name;
    rec.values.assign(encoded.n_rows, std::string());
    rec.missing.assign(encoded.n_rows, 0);

    if (name == record.label_name) {
      const std::string col_name = record.label_name + "_ord3";
      const Column* col = encoded.find_column(col_name);
      if (col == nullptr)
        throw std::invalid_argument("encoded label column not found: " +
                                    col_name);
      const size_t n_slots = record.label_basis.vocab.n_slots();
      for (size_t r = 0; r < encoded.n_rows; ++r) {
        const double v = parse_encoded_cell(*col, r);
        if (v < 0 || v >= static_cast<double>(n_slots) || std::floor(v) != v)
          throw MalformedCodeError("label slot out of range: " +
                                   col->values[r]);
        const size_t slot = static_cast<size_t>(v);
        if (slot == 0)
          rec.missing[r] = 1;
        else
          rec.values[r] = record.label_basis.vocab.category_at(slot);
      }
      out.columns.push_back(std::move(rec));
      continue;
    }

    size_t idx = record.schema.size();
    for (size_t i = 0; i < record.schema.size(); ++i) {
      if (record.schema[i].name == name) {
        idx = i;
        break;
      }
    }
    if (idx == record.schema.size())
      throw std::invalid_argument("feature not in record: " + name);

    const FittedNode* node = first_invertible(record.bases[idx]);
    if (node == nullptr)
      throw NotInvertibleError("no invertible leg for feature: " + name);

    const std::vector<std::string> names = block_names(name, *node);
    std::vector<const Column*> cols;
    cols.reserve(names.size());
    for (const auto& col_name : names) {
      const Column* col = encoded.find_column(col_name);
      if (col == nullptr)
        throw std::invalid_argument("encoded column not found: " + col_name);
      cols.push_back(col);
    }

    std::vector<double> code(names.size());
    for (size_t r = 0; r < encoded.n_rows; ++r) {
      for (size_t k = 0; k < cols.size(); ++k)
        code[k] = parse_encoded_cell(*cols[k], r);
      if (node->numeric) {
        const NumericInverse inv = invert_numeric(node->nbasis, code.data());
        rec.values[r] = format_number(inv.value);
      } else {
        const auto cat = invert_categoric(node->cbasis, code.data());
        if (cat)
          rec.values[r] = *cat;
        else
          rec.missing[r] = 1;
      }
    }
    out.columns.push_back(std::move(rec));
  }
  return out;
}

DriftReport drift_report(const TransformRecord& record,
                         const RawTable& new_table) {
  new_table.validate();
  const FeatureTable feats = extract_features(new_table, record.schema);

  DriftReport report;
  report.features.reserve(record.schema.size());
  for (size_t i = 0; i < record.schema.size(); ++i) {
    const FeatureSchema& fs = record.schema[i];
    const FeatureData& data = feats.features[i];
    FeatureDrift fd;
    fd.feature = fs.name;
    fd.numeric = fs.role == FeatureRole::kNumeric;
    if (fd.numeric) {
      if (!fs.numeric_stats)
        throw CorruptPayloadError("schema entry lacks numeric stats: " +
                                  fs.name);
      const NumericStats& base = *fs.numeric_stats;
      const bool any_finite =
          std::any_of(data.numeric.begin(), data.numeric.end(),
                      [](double v) { return std::isfinite(v); });
      if (any_finite) {
        const NumericStats now = compute_numeric_stats(data.numeric);
        const double sigma = std::max(base.stddev, kDriftEps);
        fd.numeric_drift.mean_delta = std::fabs(now.mean - base.mean) / sigma;
        fd.numeric_drift.std_delta =
            std::fabs(now.stddev - base.stddev) / sigma;
        fd.numeric_drift.missing_delta =
            now.missing_fraction - base.missing_fraction;
      } else {
        // No finite sample to compare moments against.
        fd.numeric_drift.missing_delta = 1.0 - base.missing_fraction;
      }
    } else {
      if (!fs.categoric_stats)
        throw CorruptPayloadError("schema entry lacks categoric stats: " +
                                  fs.name);
      const CategoricStats& base = *fs.categoric_stats;
      const CategoricStats now =
          compute_categoric_stats(data.text, data.missing);
      double base_total = 0;
      for (const auto& [cat, count] : base.frequency_table)
        base_total += static_cast<double>(count);
      double now_total = 0;
      for (const auto& [cat, count] : now.frequency_table)
        now_total += static_cast<double>(count);
      std::unordered_map<std::string, double> now_freq;
      if (now_total > 0) {
        for (const auto& [cat, count] : now.frequency_table)
          now_freq[cat] = static_cast<double>(count) / now_total;
      }
      double tv = 0;
      double seen_mass = 0;
      if (base_total > 0) {
        for (const auto& [cat, count] : base.frequency_table) {
          const double p = static_cast<double>(count) / base_total;
          const auto it = now_freq.find(cat);
          const double q = it == now_freq.end() ? 0.0 : it->second;
          seen_mass += q;
          tv += std::fabs(p - q);
        }
      }
      fd.categoric_drift.tv_distance = 0.5 * tv;
      fd.categoric_drift.unseen_mass =
          now_total > 0 ? std::max(0.0, 1.0 - seen_mass) : 0.0;
    }
    report.features.push_back(std::move(fd));
  }
  return report;
}

void to_json(nlohmann::json& j, const DriftReport& r) {
  auto features = nlohmann::json::array();
  for (const auto& fd : r.features) {
    nlohmann::json f{{"feature", fd.feature},
                     {"type", fd.numeric ? "numeric" : "categoric"}};
    if (fd.numeric) {
      f["mean_delta"] = fd.numeric_drift.mean_delta;
      f["std_delta"] = fd.numeric_drift.std_delta;
      f["missing_delta"] = fd.numeric_drift.missing_delta;
    } else {
      f["tv_distance"] = fd.categoric_drift.tv_distance;
      f["unseen_mass"] = fd.categoric_drift.unseen_mass;
    }
    features.push_back(std::move(f));
  }
  j = nlohmann::json{{"features", std::move(features)}};
}

void to_json(nlohmann::json& j, const TransformPlanNode& node) {
  j = nlohmann::json{{"numeric", node.numeric},
                     {"kind", node.numeric ? numeric_kind_name(node.nkind)
                                           : categoric_kind_name(node.ckind)},
                     {"keep", node.keep_output},
                     {"children", node.children}};
}

void from_json(const nlohmann::json& j, TransformPlanNode& node) {
  node.numeric = j.at("numeric").get<bool>();
  const std::string kind = j.at("kind").get<std::string>();
  if (node.numeric)
    node.nkind = numeric_kind_from_name(kind);
  else
    node.ckind = categoric_kind_from_name(kind);
  node.keep_output = j.at("keep").get<bool>();
  node.children = j.at("children").get<std::vector<TransformPlanNode>>();
}

void to_json(nlohmann::json& j, const FittedNode& node) {
  j = nlohmann::json{{"numeric", node.numeric},
                     {"keep", node.keep_output},
                     {"children", node.children}};
  if (node.numeric)
    j["basis"] = node.nbasis;
  else
    j["basis"] = node.cbasis;
}

void from_json(const nlohmann::json& j, FittedNode& node) {
  node.numeric = j.at("numeric").get<bool>();
  node.keep_output = j.at("keep").get<bool>();
  if (node.numeric)
    node.nbasis = j.at("basis").get<NumericBasis>();
  else
    node.cbasis = j.at("basis").get<CategoricBasis>();
  node.children = j.at("children").get<std::vector<FittedNode>>();
}

std::string save_record(const TransformRecord& record) {
  nlohmann::json j;
  j["format_version"] = record.format_version;
  j["scenario"] = record.scenario;
  j["seed"] = record.seed;
  auto schema = nlohmann::json::array();
  auto baseline = nlohmann::json::array();
  for (const auto& fs : record.schema) {
    schema.push_back(nlohmann::json{{"name", fs.name},
                                    {"role", role_name(fs.role)}});
    nlohmann::json b{{"name", fs.name}};
    if (fs.numeric_stats) b["numeric_stats"] = *fs.numeric_stats;
    if (fs.categoric_stats) b["categoric_stats"] = *fs.categoric_stats;
    baseline.push_back(std::move(b));
  }
  j["schema"] = std::move(schema);
  j["drift_baseline"] = std::move(baseline);
  j["plans"] = record.plans;
  j["bases"] = record.bases;
  j["infill"] = record.infill;
  j["label"] = nlohmann::json{{"name", record.label_name},
                              {"basis", record.label_basis}};
  return j.dump(2) + "\n";
}

TransformRecord load_record(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception&) {
    throw CorruptPayloadError("record payload is not valid JSON");
  }
  if (!j.is_object() || !j.contains("format_version") ||
      !j["format_version"].is_string())
    throw CorruptPayloadError("record payload lacks a format version");
  const std::string version = j["format_version"].get<std::string>();
  if (version != "1")
    throw VersionMismatchError("unsupported record format version: " +
                               version);
  try {
    TransformRecord r;
    r.format_version = version;
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    const auto& schema = j.at("schema");
    const auto& baseline = j.at("drift_baseline");
    if (!schema.is_array() || !baseline.is_array() ||
        schema.size() != baseline.size())
      throw CorruptPayloadError("schema and drift baseline are misaligned");
    for (size_t i = 0; i < schema.size(); ++i) {
      FeatureSchema fs;
      fs.name = schema[i].at("name").get<std::string>();
      fs.role = role_from_name(schema[i].at("role").get<std::string>());
      if (baseline[i].at("name").get<std::string>() != fs.name)
        throw CorruptPayloadError("drift baseline names do not match schema");
      if (baseline[i].contains("numeric_stats"))
        fs.numeric_stats = baseline[i]["numeric_stats"].get<NumericStats>();
      if (baseline[i].contains("categoric_stats"))
        fs.categoric_stats =
            baseline[i]["categoric_stats"].get<CategoricStats>();
      r.schema.push_back(std::move(fs));
    }
    r.plans = j.at("plans").get<std::vector<TransformPlanNode>>();
    r.bases = j.at("bases").get<std::vector<FittedNode>>();
    r.infill = j.at("infill").get<InfillPlan>();
    r.label_name = j.at("label").at("name").get<std::string>();
    r.label_basis = j.at("label").at("basis").get<CategoricBasis>();
    if (r.plans.size() != r.schema.size() ||
        r.bases.size() != r.schema.size())
      throw CorruptPayloadError("record arrays are misaligned");
    return r;
  } catch (const CorruptPayloadError&) {
    throw;
  } catch (const std::exception& e) {
    throw CorruptPayloadError(std::string("record payload is incomplete: ") +
                              e.what());
  }
}

}  // namespace tabenc
