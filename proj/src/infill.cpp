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

#include "tabenc/infill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tabenc/error.hpp"
#include "tabenc/rng.hpp"

namespace tabenc {

namespace {

std::string fill_kind_name(FillKind kind) {
  switch (kind) {
    case FillKind::kMeanFill: return "mean";
    case FillKind::kMissingToken: return "missing_token";
    case FillKind::kModel: return "model";
    case FillKind::kPassthrough: return "passthrough";
  }
  throw Error("unreachable fill kind");
}

FillKind fill_kind_from_name(const std::string& name) {
  if (name == "mean") return FillKind::kMeanFill;
  if (name == "missing_token") return FillKind::kMissingToken;
  if (name == "model") return FillKind::kModel;
  if (name == "passthrough") return FillKind::kPassthrough;
  throw std::invalid_argument("unknown fill kind: " + name);
}

double train_mean(const FeatureData& data) {
  double sum = 0;
  size_t count = 0;
  for (size_t i = 0; i < data.numeric.size(); ++i) {
    if (data.missing[i]) continue;
    sum += data.numeric[i];
    ++count;
  }
  if (count == 0)
    throw std::invalid_argument("numeric feature has no finite train cells");
  return sum / static_cast<double>(count);
}

InputEncoder fit_input_encoder(const FeatureSchema& schema,
                               const FeatureData& data, double fill_value) {
  InputEncoder enc;
  if (schema.role == FeatureRole::kNumeric) {
    enc.numeric = true;
    std::vector<double> filled(data.numeric);
    for (size_t i = 0; i < filled.size(); ++i) {
      if (data.missing[i]) filled[i] = fill_value;
    }
    enc.nbasis =
        fit_numeric(NumericKind::kNmbr, compute_numeric_stats(filled), filled);
  } else if (schema.role == FeatureRole::kHighCardinality) {
    enc.cbasis = fit_categoric(CategoricKind::kHsh2, data.text, data.missing);
  } else {
    enc.cbasis = fit_categoric(CategoricKind::kB1010, data.text, data.missing);
  }
  return enc;
}

// Simply-infilled encoding of one cell into `out`.
void encode_input_cell(const InputEncoder& enc, const FeatureData& data,
                       double fill_value, size_t row, double* out) {
  if (enc.numeric) {
    const double v = data.missing[row] ? fill_value : data.numeric[row];
    encode_numeric(enc.nbasis, v, out);
  } else {
    encode_categoric(enc.cbasis, data.text[row], data.missing[row] != 0, out);
  }
}

// Full encoded matrix over every feature; spans[i] is the column offset of
// feature i.
ColMatrix encode_inputs(const InfillPlan& plan, const FeatureTable& table,
                        std::vector<size_t>* spans) {
  spans->clear();
  size_t total = 0;
  for (const auto& enc : plan.inputs) {
    spans->push_back(total);
    total += enc.width();
  }
  ColMatrix cols(total, std::vector<double>(table.n_rows));
  std::vector<double> cell;
  for (size_t f = 0; f < plan.inputs.size(); ++f) {
    const InputEncoder& enc = plan.inputs[f];
    cell.resize(enc.width());
    for (size_t r = 0; r < table.n_rows; ++r) {
      encode_input_cell(enc, table.features[f], plan.features[f].fill_value,
                        r, cell.data());
      for (size_t c = 0; c < cell.size(); ++c)
        cols[(*spans)[f] + c][r] = cell[c];
    }
  }
  return cols;
}

// Copies `full` minus the target feature's own span, restricted to `rows`
// (all rows when empty).
ColMatrix drop_own_columns(const ColMatrix& full, size_t offset, size_t width,
                           const std::vector<size_t>& rows) {
  ColMatrix out;
  out.reserve(full.size() - width);
  for (size_t c = 0; c < full.size(); ++c) {
    if (c >= offset && c < offset + width) continue;
    if (rows.empty()) {
      out.push_back(full[c]);
    } else {
      std::vector<double> col;
      col.reserve(rows.size());
      for (size_t r : rows) col.push_back(full[c][r]);
      out.push_back(std::move(col));
    }
  }
  return out;
}

}  // namespace

std::string infill_strategy_name(InfillStrategy strategy) {
  return strategy == InfillStrategy::kSimple ? "simple" : "ml";
}

InfillStrategy infill_strategy_from_name(const std::string& name) {
  if (name == "simple") return InfillStrategy::kSimple;
  if (name == "ml") return InfillStrategy::kMl;
  throw std::invalid_argument("unknown infill strategy: " + name);
}

size_t InputEncoder::width() const {
  return numeric ? numeric_width(nbasis.kind) : categoric_width(cbasis);
}

HyperParams infill_hyperparams() {
  HyperParams p;
  p.max_depth = 4;
  p.learning_rate = 0.1;
  p.rounds = 60;
  p.min_child_weight = 1.0;
  p.subsample = 1.0;
  p.colsample = 1.0;
  p.l2_lambda = 1.0;
  return p;
}

InfillPlan plan_infill(const std::vector<FeatureSchema>& schema,
                       InfillStrategy strategy, const FeatureTable& train,
                       bool indicator, uint64_t seed) {
  if (schema.size() != train.features.size() ||
      schema.size() != train.names.size())
    throw std::invalid_argument("schema does not match the feature table");
  if (schema.empty()) throw std::invalid_argument("no features to plan");
  if (train.n_rows == 0) throw std::invalid_argument("empty train table");
  for (size_t f = 0; f < schema.size(); ++f) {
    if (schema[f].role == FeatureRole::kLabel)
      throw std::invalid_argument("label columns are not infilled");
    if (schema[f].name != train.names[f])
      throw std::invalid_argument("schema does not match the feature table");
  }
  if (strategy == InfillStrategy::kMl && schema.size() < 2)
    throw std::invalid_argument(
        "ml infill needs at least two features for inputs");

  InfillPlan plan;
  plan.strategy = strategy;
  plan.indicator = indicator;

  for (size_t f = 0; f < schema.size(); ++f) {
    FeatureInfill fp;
    fp.feature = schema[f].name;
    fp.numeric = schema[f].role == FeatureRole::kNumeric;
    if (fp.numeric) {
      fp.kind = FillKind::kMeanFill;
      fp.fill_value = train_mean(train.features[f]);
    } else {
      fp.kind = FillKind::kMissingToken;
    }
    plan.features.push_back(std::move(fp));
  }
  if (strategy == InfillStrategy::kSimple) return plan;

  for (size_t f = 0; f < schema.size(); ++f)
    plan.inputs.push_back(fit_input_encoder(schema[f], train.features[f],
                                            plan.features[f].fill_value));

  std::vector<size_t> spans;
  const ColMatrix full = encode_inputs(plan, train, &spans);

  for (size_t f = 0; f < schema.size(); ++f) {
    FeatureInfill& fp = plan.features[f];
    const FeatureData& data = train.features[f];
    std::vector<size_t> present;
    for (size_t r = 0; r < train.n_rows; ++r) {
      if (!data.missing[r]) present.push_back(r);
    }
    if (present.size() == train.n_rows) {
      fp.kind = FillKind::kPassthrough;
      continue;
    }
    if (schema[f].role == FeatureRole::kHighCardinality) continue;
    if (present.size() < 2) continue;  // nothing to learn from

    const ColMatrix inputs =
        drop_own_columns(full, spans[f], plan.inputs[f].width(), present);
    if (fp.numeric) {
      std::vector<double> targets;
      targets.reserve(present.size());
      for (size_t r : present) targets.push_back(data.numeric[r]);
      fp.reg_model = boost_fit_regression(inputs, targets,
                                          infill_hyperparams(),
                                          mix_seed(seed, f));
      fp.kind = FillKind::kModel;
    } else {
      const Vocab vocab =
          fit_vocab(data.text, data.missing, VocabOrder::kFrequency);
      if (vocab.categories.size() < 2) continue;  // single observed class
      std::vector<int> targets;
      targets.reserve(present.size());
      for (size_t r : present)
        targets.push_back(
            static_cast<int>(vocab.slot_of(data.text[r])) - 1);
      fp.cls_model = boost_fit(inputs, targets, infill_hyperparams(),
                               mix_seed(seed, f));
      fp.classes = vocab.categories;
      fp.kind = FillKind::kModel;
    }
  }
  return plan;
}

InfillResult apply_infill(const InfillPlan& plan, const FeatureTable& table) {
  if (plan.features.size() != table.features.size())
    throw std::invalid_argument("infill plan does not match the table");
  for (size_t f = 0; f < plan.features.size(); ++f) {
    if (plan.features[f].feature != table.names[f])
      throw std::invalid_argument("infill plan does not match the table");
  }

  InfillResult result;
  result.table = table;
  if (plan.indicator) {
    result.indicators.resize(table.features.size());
    for (size_t f = 0; f < table.features.size(); ++f) {
      result.indicators[f].resize(table.n_rows, 0.0);
      for (size_t r = 0; r < table.n_rows; ++r)
        result.indicators[f][r] = table.features[f].missing[r] ? 1.0 : 0.0;
    }
  }

  // Model inputs read the original missing masks, so they see the same
  // simply-infilled encodings regardless of fill order.
  std::vector<size_t> spans;
  ColMatrix full;
  if (plan.strategy == InfillStrategy::kMl)
    full = encode_inputs(plan, table, &spans);

  for (size_t f = 0; f < plan.features.size(); ++f) {
    const FeatureInfill& fp = plan.features[f];
    FeatureData& out = result.table.features[f];
    std::vector<size_t> rows;
    for (size_t r = 0; r < table.n_rows; ++r) {
      if (out.missing[r]) rows.push_back(r);
    }
    if (rows.empty()) continue;

    if (fp.kind == FillKind::kModel) {
      const ColMatrix inputs =
          drop_own_columns(full, spans[f], plan.inputs[f].width(), rows);
      for (size_t i = 0; i < rows.size(); ++i) {
        if (fp.reg_model) {
          out.numeric[rows[i]] = predict_regression(*fp.reg_model, inputs, i);
        } else {
          const int cls = predict_class(*fp.cls_model, inputs, i);
          out.text[rows[i]] = fp.classes[static_cast<size_t>(cls)];
        }
        out.missing[rows[i]] = 0;
      }
      continue;
    }

    // Simple fill, also the fallback for pass-through plans.
    for (size_t r : rows) {
      if (fp.numeric) out.numeric[r] = fp.fill_value;
      // Categoric cells keep the empty payload: vocab slot 0.
      out.missing[r] = 0;
    }
  }
  return result;
}

void to_json(nlohmann::json& j, const InfillPlan& p) {
  nlohmann::json features = nlohmann::json::array();
  for (const FeatureInfill& f : p.features) {
    nlohmann::json e{{"feature", f.feature},
                     {"numeric", f.numeric},
                     {"kind", fill_kind_name(f.kind)},
                     {"fill_value", f.fill_value},
                     {"classes", f.classes}};
    e["reg_model"] = f.reg_model ? nlohmann::json(*f.reg_model)
                                 : nlohmann::json(nullptr);
    e["cls_model"] = f.cls_model ? nlohmann::json(*f.cls_model)
                                 : nlohmann::json(nullptr);
    features.push_back(std::move(e));
  }
  nlohmann::json inputs = nlohmann::json::array();
  for (const InputEncoder& enc : p.inputs) {
    inputs.push_back(nlohmann::json{{"numeric", enc.numeric},
                                    {"nbasis", enc.nbasis},
                                    {"cbasis", enc.cbasis}});
  }
  j = nlohmann::json{{"strategy", infill_strategy_name(p.strategy)},
                     {"indicator", p.indicator},
                     {"features", std::move(features)},
                     {"inputs", std::move(inputs)}};
}

void from_json(const nlohmann::json& j, InfillPlan& p) {
  p.strategy =
      infill_strategy_from_name(j.at("strategy").get<std::string>());
  j.at("indicator").get_to(p.indicator);
  p.features.clear();
  for (const auto& e : j.at("features")) {
    FeatureInfill f;
    e.at("feature").get_to(f.feature);
    e.at("numeric").get_to(f.numeric);
    f.kind = fill_kind_from_name(e.at("kind").get<std::string>());
    e.at("fill_value").get_to(f.fill_value);
    e.at("classes").get_to(f.classes);
    if (!e.at("reg_model").is_null())
      f.reg_model = e.at("reg_model").get<RegressionModel>();
    if (!e.at("cls_model").is_null())
      f.cls_model = e.at("cls_model").get<BoostedModel>();
    p.features.push_back(std::move(f));
  }
  p.inputs.clear();
  for (const auto& e : j.at("inputs")) {
    InputEncoder enc;
    e.at("numeric").get_to(enc.numeric);
    e.at("nbasis").get_to(enc.nbasis);
    e.at("cbasis").get_to(enc.cbasis);
    p.inputs.push_back(std::move(enc));
  }
}

}  // namespace tabenc
