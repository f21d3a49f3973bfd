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

#ifndef TABENC_PIPELINE_HPP_
#define TABENC_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabenc/categoric.hpp"
#include "tabenc/gbdt.hpp"
#include "tabenc/infill.hpp"
#include "tabenc/numeric.hpp"
#include "tabenc/schema.hpp"
#include "tabenc/table.hpp"

namespace tabenc {

/// An encoding scenario names one numeric leg and one categoric leg.
/// Accepted spellings: "default", "numeric:<leg>", "categoric:<leg>", and
/// "numeric:<leg>+categoric:<leg>".
struct Scenario {
  std::string numeric_leg = "default";
  std::string categoric_leg = "default";

  std::string name() const;
};

Scenario parse_scenario(const std::string& name);

const std::vector<std::string>& numeric_scenario_legs();
const std::vector<std::string>& categoric_scenario_legs();

/// One node of a per-feature transform tree. Children consume the same
/// pre-encoding values as their parent; keep_output selects which nodes
/// contribute encoded columns.
struct TransformPlanNode {
  bool numeric = true;
  NumericKind nkind = NumericKind::kNmbr;
  CategoricKind ckind = CategoricKind::kB1010;
  bool keep_output = true;
  std::vector<TransformPlanNode> children;
};

constexpr size_t kMaxPlanDepth = 3;

/// Resolves the scenario into one plan tree per schema entry (labels get a
/// frequency-ordinal node). The powertransform leg picks the encoder per
/// feature from the train statistics carried by the schema.
std::vector<TransformPlanNode> build_plan(
    const std::vector<FeatureSchema>& schema, const Scenario& scenario);

/// Fitted mirror of a TransformPlanNode.
struct FittedNode {
  bool numeric = true;
  bool keep_output = true;
  NumericBasis nbasis;
  CategoricBasis cbasis;
  std::vector<FittedNode> children;
};

/// Everything a fit produces: enough to apply, invert, and drift-check
/// later data without the train table. The schema entries carry the
/// fit-time raw statistics, which double as the drift baseline.
struct TransformRecord {
  std::string format_version = "1";
  std::string scenario;
  uint64_t seed = 0;
  std::vector<FeatureSchema> schema;     // features only, fit-time stats
  std::vector<TransformPlanNode> plans;  // aligned with schema
  std::vector<FittedNode> bases;         // aligned with schema
  InfillPlan infill;
  std::string label_name;
  CategoricBasis label_basis;  // frequency ordinal over train labels
};

/// Column names the record produces, in output order (indicator columns
/// included, the label column excluded).
std::vector<std::string> encoded_column_names(const TransformRecord& record);

/// Encoded output: fully finite feature columns plus optional ordinal
/// label slots (0 means the label was missing or unseen).
struct EncodedTable {
  std::vector<std::string> names;
  ColMatrix cols;
  size_t n_rows = 0;
  bool has_labels = false;
  std::vector<size_t> labels;
};

/// Writes the encoded table as CSV; the label column (when present) goes
/// last under "<label>_ord3".
void write_encoded_csv(const EncodedTable& table,
                       const std::string& label_name, const std::string& path);

/// Seeded stratified partition of the rows by label value. Rows with a
/// missing label are dropped from both sides. Per class, the validation
/// quota is floor(fraction * count) with the overall remainder distributed
/// by largest fractional part among classes that keep at least one train
/// row, so every observed class survives in train. Falls back to an
/// unstratified split when fewer than two classes exist.
struct SplitResult {
  std::vector<size_t> train_rows;
  std::vector<size_t> valid_rows;
  std::vector<size_t> dropped_rows;  // missing labels
  bool stratified = true;
};

SplitResult stratified_split(const std::vector<std::string>& labels,
                             const std::vector<uint8_t>& missing,
                             double fraction, uint64_t seed);

struct FitResult {
  EncodedTable train;
  EncodedTable validation;
  TransformRecord record;
  std::vector<size_t> train_rows;  // indices into the input table
  std::vector<size_t> valid_rows;
  std::vector<std::string> warnings;
};

/// Fit analog of automunge: partitions validation rows before any basis is
/// fit, fits schema, infill, and encoder bases on the train rows only, and
/// encodes both partitions on the train basis. The returned encoded train
/// equals apply_pipeline(record, train rows) bit for bit.
FitResult fit_pipeline(const RawTable& table, const std::string& label_name,
                       const Scenario& scenario, double validation_fraction,
                       uint64_t seed,
                       InfillStrategy infill = InfillStrategy::kSimple,
                       bool indicator = false);

struct ApplyResult {
  EncodedTable table;
  std::vector<std::string> warnings;  // e.g. ignored unknown columns
};

/// Apply analog of postmunge: a pure function of (record, table). The
/// label column is optional; unknown columns are ignored with a warning.
ApplyResult apply_pipeline(const TransformRecord& record,
                           const RawTable& table);

/// Recovers raw columns from an encoded CSV. Each requested feature uses
/// its first kept invertible node; missing/unseen codes become missing
/// cells. The label name inverts through the label basis. Throws
/// NotInvertibleError when a feature has no invertible leg.
RawTable invert_pipeline(const TransformRecord& record,
                         const RawTable& encoded,
                         const std::vector<std::string>& feature_names);

struct NumericDrift {
  double mean_delta = 0;  // |new - train| mean over max(train stddev, eps)
  double std_delta = 0;
  double missing_delta = 0;  // signed fraction change
};

struct CategoricDrift {
  double tv_distance = 0;  // total variation over the train vocabulary
  double unseen_mass = 0;  // fraction of present cells outside the vocab
};

struct FeatureDrift {
  std::string feature;
  bool numeric = false;
  NumericDrift numeric_drift;
  CategoricDrift categoric_drift;
};

struct DriftReport {
  std::vector<FeatureDrift> features;
};

DriftReport drift_report(const TransformRecord& record,
                         const RawTable& new_table);

void to_json(nlohmann::json& j, const DriftReport& r);

/// Canonical JSON bytes: UTF-8, sorted keys, explicit format_version.
std::string save_record(const TransformRecord& record);

/// Parses record bytes. Throws VersionMismatchError on an unknown
/// format_version and CorruptPayloadError on anything unparseable or
/// structurally incomplete.
TransformRecord load_record(const std::string& bytes);

}  // namespace tabenc

#endif  // TABENC_PIPELINE_HPP_
