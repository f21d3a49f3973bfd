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

#include "tabenc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "tabenc/error.hpp"
#include "tabenc/rng.hpp"

namespace tabenc {

namespace {

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  const auto now = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(now - start).count();
}

// Encoded label slots are 1..n once missing-label rows are dropped and
// every class keeps a train row; the learner wants 0..n-1.
std::vector<int> to_class_ids(const EncodedTable& table,
                              const std::string& dataset) {
  std::vector<int> ids;
  ids.reserve(table.labels.size());
  for (size_t slot : table.labels) {
    if (slot == 0)
      throw Error("label missing or unseen in partition: " + dataset);
    ids.push_back(static_cast<int>(slot - 1));
  }
  return ids;
}

}  // namespace

const std::vector<std::string>& default_bench_scenarios() {
  static const std::vector<std::string> kScenarios = {
      "default",
      "numeric:qttf",
      "numeric:powertransform",
      "numeric:mnmx",
      "numeric:mnm3",
      "numeric:binstransform",
      "categoric:onht",
      "categoric:ord3",
      "categoric:ordl",
      "categoric:hsh2",
      "categoric:or19"};
  return kScenarios;
}

std::string environment_stamp() {
  std::string s;
#if defined(__clang__)
  s += "clang ";
  s += __clang_version__;
#elif defined(__GNUC__)
  s += "gcc ";
  s += __VERSION__;
#else
  s += "unknown compiler";
#endif
#if defined(__linux__)
  s += "; linux";
#elif defined(__APPLE__)
  s += "; macos";
#elif defined(_WIN32)
  s += "; windows";
#else
  s += "; unknown os";
#endif
  s += "; " + std::to_string(sizeof(void*) * 8) + "-bit";
#ifdef NDEBUG
  s += "; release";
#else
  s += "; debug";
#endif
  return s;
}

BenchRow run_scenario(const RawTable& table, const std::string& dataset_name,
                      const std::string& label_name, const Scenario& scenario,
                      const BenchConfig& config, size_t repetition_index) {
  if (config.repetitions < 1)
    throw std::invalid_argument("repetitions must be at least 1");

  BenchRow row;
  row.dataset = dataset_name;
  row.scenario = scenario.name();
  row.repetition = repetition_index;
  row.seed = config.base_seed + repetition_index;

  const auto encode_start = std::chrono::steady_clock::now();
  const FitResult fit = fit_pipeline(table, label_name, scenario,
                                     config.validation_fraction, row.seed);
  row.encoding_seconds = seconds_since(encode_start);

  const size_t n_classes = fit.record.label_basis.vocab.categories.size();
  if (n_classes < 2)
    throw std::invalid_argument("label needs at least 2 classes: " +
                                dataset_name);

  const std::vector<int> train_labels = to_class_ids(fit.train, dataset_name);
  const std::vector<int> valid_labels =
      to_class_ids(fit.validation, dataset_name);

  const TuneResult tuned =
      tune(fit.train.cols, train_labels, config.k_folds, config.patience,
           config.max_trials, row.seed);
  row.tuning_seconds = tuned.wall_time_seconds;
  row.trials = tuned.trials.size();
  row.best_params = tuned.best_params;

  const BoostedModel model = boost_fit(fit.train.cols, train_labels,
                                       tuned.best_params, mix_seed(row.seed, 4));
  const std::vector<int> predictions =
      predict_classes(model, fit.validation.cols);
  row.validation_f1 = f1_score(predictions, valid_labels, n_classes);
  row.encoded_column_count = fit.train.names.size();
  return row;
}

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::vector<const BenchRow*>>
      groups;
  for (const auto& row : rows)
    groups[{row.dataset, row.scenario}].push_back(&row);

  std::vector<BenchAggregate> aggs;
  aggs.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    BenchAggregate agg;
    agg.dataset = key.first;
    agg.scenario = key.second;
    agg.min_f1 = members.front()->validation_f1;
    agg.max_f1 = agg.min_f1;
    agg.min_tuning_seconds = members.front()->tuning_seconds;
    agg.max_tuning_seconds = agg.min_tuning_seconds;
    for (const BenchRow* row : members) {
      agg.mean_f1 += row->validation_f1;
      agg.mean_tuning_seconds += row->tuning_seconds;
      agg.mean_encoding_seconds += row->encoding_seconds;
      agg.min_f1 = std::min(agg.min_f1, row->validation_f1);
      agg.max_f1 = std::max(agg.max_f1, row->validation_f1);
      agg.min_tuning_seconds =
          std::min(agg.min_tuning_seconds, row->tuning_seconds);
      agg.max_tuning_seconds =
          std::max(agg.max_tuning_seconds, row->tuning_seconds);
    }
    const double n = static_cast<double>(members.size());
    agg.mean_f1 /= n;
    agg.mean_tuning_seconds /= n;
    agg.mean_encoding_seconds /= n;
    aggs.push_back(std::move(agg));
  }
  return aggs;
}

namespace {

std::vector<std::string> rank_scenarios(
    const std::vector<BenchAggregate>& aggs,
    double (*metric)(const BenchAggregate&), bool descending) {
  std::map<std::string, std::pair<double, size_t>> sums;
  for (const auto& agg : aggs) {
    auto& slot = sums[agg.scenario];
    slot.first += metric(agg);
    slot.second += 1;
  }
  std::vector<std::pair<std::string, double>> means;
  means.reserve(sums.size());
  for (const auto& [scenario, sum] : sums)
    means.emplace_back(scenario,
                       sum.first / static_cast<double>(sum.second));
  std::sort(means.begin(), means.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second)
      return descending ? a.second > b.second : a.second < b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  out.reserve(means.size());
  for (const auto& [scenario, mean] : means) out.push_back(scenario);
  return out;
}

}  // namespace

std::vector<std::string> rank_by_f1(const std::vector<BenchAggregate>& aggs) {
  return rank_scenarios(
      aggs, [](const BenchAggregate& a) { return a.mean_f1; }, true);
}

std::vector<std::string> rank_by_tuning(
    const std::vector<BenchAggregate>& aggs) {
  return rank_scenarios(
      aggs, [](const BenchAggregate& a) { return a.mean_tuning_seconds; },
      false);
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.repetitions < 1)
    throw std::invalid_argument("repetitions must be at least 1");
  if (config.datasets.empty())
    throw std::invalid_argument("no datasets configured");

  BenchReport report;
  report.config = config;
  if (report.config.scenarios.empty())
    report.config.scenarios = default_bench_scenarios();
  report.environment = environment_stamp();

  for (const auto& dataset : report.config.datasets) {
    const RawTable table = read_csv_file(dataset.path);
    for (const auto& name : report.config.scenarios) {
      const Scenario scenario = parse_scenario(name);
      for (size_t rep = 0; rep < report.config.repetitions; ++rep)
        report.rows.push_back(run_scenario(table, dataset.name, dataset.label,
                                           scenario, report.config, rep));
    }
  }
  report.aggregates = aggregate_rows(report.rows);
  report.f1_ranking = rank_by_f1(report.aggregates);
  report.tuning_ranking = rank_by_tuning(report.aggregates);
  return report;
}

std::string emit_report(const BenchReport& report, const std::string& format) {
  if (format == "json") {
    nlohmann::json j = report;
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    RawTable table;
    table.n_rows = report.rows.size();
    const std::vector<std::string> names = {
        "dataset",          "scenario",       "repetition",
        "seed",             "encoded_column_count", "trials",
        "validation_f1",    "tuning_seconds", "encoding_seconds",
        "max_depth",        "learning_rate",  "rounds",
        "min_child_weight", "subsample",      "colsample",
        "l2_lambda"};
    for (const auto& name : names) {
      Column col;
      col.name = name;
      col.values.reserve(report.rows.size());
      col.missing.assign(report.rows.size(), 0);
      table.columns.push_back(std::move(col));
    }
    for (const auto& row : report.rows) {
      size_t c = 0;
      auto push = [&](std::string v) {
        table.columns[c++].values.push_back(std::move(v));
      };
      push(row.dataset);
      push(row.scenario);
      push(std::to_string(row.repetition));
      push(std::to_string(row.seed));
      push(std::to_string(row.encoded_column_count));
      push(std::to_string(row.trials));
      push(format_number(row.validation_f1));
      push(format_number(row.tuning_seconds));
      push(format_number(row.encoding_seconds));
      push(std::to_string(row.best_params.max_depth));
      push(format_number(row.best_params.learning_rate));
      push(std::to_string(row.best_params.rounds));
      push(format_number(row.best_params.min_child_weight));
      push(format_number(row.best_params.subsample));
      push(format_number(row.best_params.colsample));
      push(format_number(row.best_params.l2_lambda));
    }
    std::ostringstream out;
    write_csv(table, out);
    return out.str();
  }
  throw std::invalid_argument("unknown report format: " + format);
}

RawTable make_separable_dataset(size_t n_rows, double separation_sigmas,
                                uint64_t seed) {
  Rng rng(seed);
  Column x0, x1, y;
  x0.name = "x0";
  x1.name = "x1";
  y.name = "y";
  for (size_t i = 0; i < n_rows; ++i) {
    const bool pos = rng.uniform() < 0.5;
    const double center = pos ? separation_sigmas : 0.0;
    x0.values.push_back(format_number(rng.normal() + center));
    x1.values.push_back(format_number(rng.normal() + center));
    y.values.push_back(pos ? "pos" : "neg");
  }
  x0.missing.assign(n_rows, 0);
  x1.missing.assign(n_rows, 0);
  y.missing.assign(n_rows, 0);
  RawTable table;
  table.n_rows = n_rows;
  table.columns = {std::move(x0), std::move(x1), std::move(y)};
  return table;
}

RawTable make_highcard_dataset(size_t n_rows, size_t n_categories,
                               uint64_t seed) {
  if (n_categories < 2)
    throw std::invalid_argument("need at least 2 categories");
  Rng rng(seed);
  Column code, noise, y;
  code.name = "code";
  noise.name = "noise";
  y.name = "y";
  for (size_t i = 0; i < n_rows; ++i) {
    const uint64_t idx = static_cast<uint64_t>(
        rng.uniform_int(0, static_cast<int64_t>(n_categories - 1)));
    std::string tag = std::to_string(idx);
    while (tag.size() < 4) tag.insert(tag.begin(), '0');
    code.values.push_back("c" + tag);
    noise.values.push_back(format_number(rng.normal()));
    const bool flip = rng.uniform() < 0.15;
    const bool group = (idx % 2 == 1) != flip;
    y.values.push_back(group ? "g1" : "g0");
  }
  code.missing.assign(n_rows, 0);
  noise.missing.assign(n_rows, 0);
  y.missing.assign(n_rows, 0);
  RawTable table;
  table.n_rows = n_rows;
  table.columns = {std::move(code), std::move(noise), std::move(y)};
  return table;
}

RawTable make_skewed_dataset(size_t n_rows, uint64_t seed) {
  Rng rng(seed);
  Column x, z, y;
  x.name = "x";
  z.name = "z";
  y.name = "y";
  for (size_t i = 0; i < n_rows; ++i) {
    const double xv = rng.exponential(1.0);
    const double zv = rng.normal();
    x.values.push_back(format_number(xv));
    z.values.push_back(format_number(zv));
    const bool flip = rng.uniform() < 0.1;
    const bool hi = (xv + 0.3 * zv > 0.7) != flip;
    y.values.push_back(hi ? "hi" : "lo");
  }
  x.missing.assign(n_rows, 0);
  z.missing.assign(n_rows, 0);
  y.missing.assign(n_rows, 0);
  RawTable table;
  table.n_rows = n_rows;
  table.columns = {std::move(x), std::move(z), std::move(y)};
  return table;
}

void to_json(nlohmann::json& j, const BenchDataset& d) {
  j = nlohmann::json{{"name", d.name}, {"path", d.path}, {"label", d.label}};
}

void from_json(const nlohmann::json& j, BenchDataset& d) {
  d.name = j.at("name").get<std::string>();
  d.path = j.at("path").get<std::string>();
  d.label = j.at("label").get<std::string>();
}

void to_json(nlohmann::json& j, const BenchConfig& c) {
  j = nlohmann::json{{"datasets", c.datasets},
                     {"scenarios", c.scenarios},
                     {"repetitions", c.repetitions},
                     {"validation_fraction", c.validation_fraction},
                     {"k_folds", c.k_folds},
                     {"patience", c.patience},
                     {"max_trials", c.max_trials},
                     {"base_seed", c.base_seed}};
}

void from_json(const nlohmann::json& j, BenchConfig& c) {
  c.datasets = j.at("datasets").get<std::vector<BenchDataset>>();
  c.scenarios = j.at("scenarios").get<std::vector<std::string>>();
  c.repetitions = j.at("repetitions").get<size_t>();
  c.validation_fraction = j.at("validation_fraction").get<double>();
  c.k_folds = j.at("k_folds").get<size_t>();
  c.patience = j.at("patience").get<size_t>();
  c.max_trials = j.at("max_trials").get<size_t>();
  c.base_seed = j.at("base_seed").get<uint64_t>();
}

void to_json(nlohmann::json& j, const BenchRow& r) {
  j = nlohmann::json{{"dataset", r.dataset},
                     {"scenario", r.scenario},
                     {"repetition", r.repetition},
                     {"seed", r.seed},
                     {"tuning_seconds", r.tuning_seconds},
                     {"encoding_seconds", r.encoding_seconds},
                     {"validation_f1", r.validation_f1},
                     {"best_params", r.best_params},
                     {"encoded_column_count", r.encoded_column_count},
                     {"trials", r.trials}};
}

void from_json(const nlohmann::json& j, BenchRow& r) {
  r.dataset = j.at("dataset").get<std::string>();
  r.scenario = j.at("scenario").get<std::string>();
  r.repetition = j.at("repetition").get<size_t>();
  r.seed = j.at("seed").get<uint64_t>();
  r.tuning_seconds = j.at("tuning_seconds").get<double>();
  r.encoding_seconds = j.at("encoding_seconds").get<double>();
  r.validation_f1 = j.at("validation_f1").get<double>();
  r.best_params = j.at("best_params").get<HyperParams>();
  r.encoded_column_count = j.at("encoded_column_count").get<size_t>();
  r.trials = j.at("trials").get<size_t>();
}

void to_json(nlohmann::json& j, const BenchAggregate& a) {
  j = nlohmann::json{{"dataset", a.dataset},
                     {"scenario", a.scenario},
                     {"mean_f1", a.mean_f1},
                     {"min_f1", a.min_f1},
                     {"max_f1", a.max_f1},
                     {"mean_tuning_seconds", a.mean_tuning_seconds},
                     {"min_tuning_seconds", a.min_tuning_seconds},
                     {"max_tuning_seconds", a.max_tuning_seconds},
                     {"mean_encoding_seconds", a.mean_encoding_seconds}};
}

void from_json(const nlohmann::json& j, BenchAggregate& a) {
  a.dataset = j.at("dataset").get<std::string>();
  a.scenario = j.at("scenario").get<std::string>();
  a.mean_f1 = j.at("mean_f1").get<double>();
  a.min_f1 = j.at("min_f1").get<double>();
  a.max_f1 = j.at("max_f1").get<double>();
  a.mean_tuning_seconds = j.at("mean_tuning_seconds").get<double>();
  a.min_tuning_seconds = j.at("min_tuning_seconds").get<double>();
  a.max_tuning_seconds = j.at("max_tuning_seconds").get<double>();
  a.mean_encoding_seconds = j.at("mean_encoding_seconds").get<double>();
}

void to_json(nlohmann::json& j, const BenchReport& r) {
  j = nlohmann::json{{"config", r.config},
                     {"environment", r.environment},
                     {"rows", r.rows},
                     {"aggregates", r.aggregates},
                     {"rankings",
                      {{"by_f1", r.f1_ranking},
                       {"by_tuning_seconds", r.tuning_ranking}}}};
}

void from_json(const nlohmann::json& j, BenchReport& r) {
  r.config = j.at("config").get<BenchConfig>();
  r.environment = j.at("environment").get<std::string>();
  r.rows = j.at("rows").get<std::vector<BenchRow>>();
  r.aggregates = j.at("aggregates").get<std::vector<BenchAggregate>>();
  r.f1_ranking = j.at("rankings").at("by_f1").get<std::vector<std::string>>();
  r.tuning_ranking =
      j.at("rankings").at("by_tuning_seconds").get<std::vector<std::string>>();
}

}  // namespace tabenc
