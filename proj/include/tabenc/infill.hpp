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

#ifndef TABENC_INFILL_HPP_
#define TABENC_INFILL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabenc/categoric.hpp"
#include "tabenc/gbdt.hpp"
#include "tabenc/numeric.hpp"
#include "tabenc/schema.hpp"

namespace tabenc {

enum class InfillStrategy { kSimple, kMl };

std::string infill_strategy_name(InfillStrategy strategy);
InfillStrategy infill_strategy_from_name(const std::string& name);

enum class FillKind {
  kMeanFill,      // numeric: train mean
  kMissingToken,  // categoric: reserved vocab slot 0
  kModel,         // boosted model over the other features
  kPassthrough,   // no missing train cells; falls back to the simple fill
};

/// Fill rule of one feature. Model-backed plans keep the simple fill as
/// the apply-time fallback and remember which encoded input columns belong
/// to the feature itself so they can be dropped from the model inputs.
struct FeatureInfill {
  std::string feature;
  bool numeric = false;
  FillKind kind = FillKind::kMeanFill;
  double fill_value = 0;  // train mean; finite by construction
  std::optional<RegressionModel> reg_model;
  std::optional<BoostedModel> cls_model;
  std::vector<std::string> classes;  // class index -> category
};

/// Encoder of one feature inside the shared ml input matrix: z-score for
/// numeric features, binary codes for categoric, hash slots for
/// high-cardinality. Fit on the simply-infilled train column.
struct InputEncoder {
  bool numeric = false;
  NumericBasis nbasis;
  CategoricBasis cbasis;

  size_t width() const;
};

struct InfillPlan {
  InfillStrategy strategy = InfillStrategy::kSimple;
  bool indicator = false;
  std::vector<FeatureInfill> features;  // table order, labels excluded
  std::vector<InputEncoder> inputs;     // ml only, aligned with features
};

/// Fixed model configuration for infill; tuning happens only in the
/// supervised benchmark path.
HyperParams infill_hyperparams();

/// Fits one fill rule per feature. `schema` and `train` must cover the
/// same label-free columns in the same order. Simple strategy assigns the
/// train mean or the missing token; ml trains one boosted model per
/// feature with at least one missing train cell (regression for numeric
/// targets, classification for categoric ones) on the simply-infilled,
/// default-encoded other features. Features without missing cells get a
/// pass-through plan. High-cardinality targets and targets with fewer
/// than two present categories keep the simple rule.
InfillPlan plan_infill(const std::vector<FeatureSchema>& schema,
                       InfillStrategy strategy, const FeatureTable& train,
                       bool indicator = false, uint64_t seed = 0);

struct InfillResult {
  FeatureTable table;  // no missing cells remain
  // One 0/1 column per feature marking the cells that arrived missing;
  // empty when the plan has indicators disabled.
  std::vector<std::vector<double>> indicators;
};

/// Replaces every missing cell per the plan. Non-missing cells are never
/// altered; model inputs are the simply-infilled encodings, so a second
/// application is the identity.
InfillResult apply_infill(const InfillPlan& plan, const FeatureTable& table);

void to_json(nlohmann::json& j, const InfillPlan& p);
void from_json(const nlohmann::json& j, InfillPlan& p);

}  // namespace tabenc

#endif  // TABENC_INFILL_HPP_
