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

#ifndef TABENC_BENCH_HPP_
#define TABENC_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tabenc/gbdt.hpp"
#include "tabenc/pipeline.hpp"
#include "tabenc/table.hpp"

namespace tabenc {

struct BenchDataset {
  std::string name;   // report key
  std::string path;   // csv on disk
  std::string label;  // label column
};

/// Benchmark protocol. The defaults are the reference protocol: 5
/// repetitions, 25% validation partition, 5-fold tuning with patience 50.
struct BenchConfig {
  std::vector<BenchDataset> datasets;
  std::vector<std::string> scenarios;  // empty means default_bench_scenarios
  size_t repetitions = 5;
  double validation_fraction = 0.25;
  size_t k_folds = 5;
  size_t patience = 50;
  size_t max_trials = 200;
  uint64_t base_seed = 0;
};

/// The default sweep: every single-leg variation against the default pair.
const std::vector<std::string>& default_bench_scenarios();

/// One (dataset, scenario, repetition) measurement. tuning_seconds covers
/// the random-search loop only; encoding_seconds covers the pipeline fit.
struct BenchRow {
  std::string dataset;
  std::string scenario;
  size_t repetition = 0;
  uint64_t seed = 0;
  double tuning_seconds = 0;
  double encoding_seconds = 0;
  double validation_f1 = 0;
  HyperParams best_params;
  size_t encoded_column_count = 0;
  size_t trials = 0;
};

struct BenchAggregate {
  std::string dataset;
  std::string scenario;
  double mean_f1 = 0;
  double min_f1 = 0;
  double max_f1 = 0;
  double mean_tuning_seconds = 0;
  double min_tuning_seconds = 0;
  double max_tuning_seconds = 0;
  double mean_encoding_seconds = 0;
};

struct BenchReport {
  BenchConfig config;
  std::string environment;
  std::vector<BenchRow> rows;
  std::vector<BenchAggregate> aggregates;  // sorted by (dataset, scenario)
  std::vector<std::string> f1_ranking;     // scenarios, best mean f1 first
  std::vector<std::string> tuning_ranking;  // scenarios, fastest first
};

/// Compiler, platform, and build flavor; no timestamps, so two runs on one
/// machine stamp identically.
std::string environment_stamp();

/// Runs one benchmark cell with seed = base_seed + repetition_index: fit
/// the pipeline, tune on the encoded train partition, refit the best
/// parameters on the full encoded train, and score f1 on the encoded
/// validation partition.
BenchRow run_scenario(const RawTable& table, const std::string& dataset_name,
                      const std::string& label_name, const Scenario& scenario,
                      const BenchConfig& config, size_t repetition_index);

/// Mean plus min/max band per (dataset, scenario), sorted by key.
std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows);

/// Scenario rankings over the aggregates, averaging across datasets.
/// Ties break on the scenario name.
std::vector<std::string> rank_by_f1(const std::vector<BenchAggregate>& aggs);
std::vector<std::string> rank_by_tuning(
    const std::vector<BenchAggregate>& aggs);

/// The full sweep: datasets x scenarios x repetitions, sequentially for
/// fair wall times.
BenchReport run_bench(const BenchConfig& config);

/// "json" mirrors BenchReport; "csv" has one row per measurement with the
/// fixed column order
///   dataset,scenario,repetition,seed,encoded_column_count,trials,
///   validation_f1,tuning_seconds,encoding_seconds,max_depth,
///   learning_rate,rounds,min_child_weight,subsample,colsample,l2_lambda.
std::string emit_report(const BenchReport& report, const std::string& format);

// Synthetic dataset generators. Columns end with the label "y".

/// Two unit-variance gaussian blobs ("neg"/"pos") whose centers sit
/// separation_sigmas apart on each of the two numeric axes.
RawTable make_separable_dataset(size_t n_rows, double separation_sigmas,
                                uint64_t seed);

/// One high-cardinality "code" column over n_categories values whose
/// parity group drives the label at 15% noise, plus a gaussian "noise"
/// column.
RawTable make_highcard_dataset(size_t n_rows, size_t n_categories,
                               uint64_t seed);

/// A heavily right-skewed exponential "x" with a gaussian companion "z";
/// the label thresholds a mix of both at 10% noise.
RawTable make_skewed_dataset(size_t n_rows, uint64_t seed);

void to_json(nlohmann::json& j, const BenchDataset& d);
void from_json(const nlohmann::json& j, BenchDataset& d);
void to_json(nlohmann::json& j, const BenchConfig& c);
void from_json(const nlohmann::json& j, BenchConfig& c);
void to_json(nlohmann::json& j, const BenchRow& r);
void from_json(const nlohmann::json& j, BenchRow& r);
void to_json(nlohmann::json& j, const BenchAggregate& a);
void from_json(const nlohmann::json& j, BenchAggregate& a);
void to_json(nlohmann::json& j, const BenchReport& r);
void from_json(const nlohmann::json& j, BenchReport& r);

}  // namespace tabenc

#endif  // TABENC_BENCH_HPP_
