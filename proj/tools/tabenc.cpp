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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tabenc/bench.hpp"
#include "tabenc/error.hpp"
#include "tabenc/infill.hpp"
#include "tabenc/pipeline.hpp"
#include "tabenc/table.hpp"

namespace {

using tabenc::RawTable;

std::string error_json(const std::string& type, const std::string& message) {
  nlohmann::json j{{"error", {{"type", type}, {"message", message}}}};
  return j.dump();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tabenc::Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tabenc::Error("cannot write file: " + path);
  out << bytes;
}

std::vector<std::string> split_commas(const std::string& joined) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= joined.size()) {
    const size_t comma = joined.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(joined.substr(start));
      break;
    }
    out.push_back(joined.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// "numeric:all" / "categoric:all" expand to every single-leg scenario of
// that side; anything else must parse as a scenario name.
std::vector<std::string> expand_scenarios(const std::string& joined) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto push = [&](const std::string& name) {
    if (seen.insert(name).second) out.push_back(name);
  };
  for (const auto& token : split_commas(joined)) {
    if (token == "numeric:all") {
      for (const auto& leg : tabenc::numeric_scenario_legs()) {
        tabenc::Scenario s;
        s.numeric_leg = leg;
        push(s.name());
      }
    } else if (token == "categoric:all") {
      for (const auto& leg : tabenc::categoric_scenario_legs()) {
        tabenc::Scenario s;
        s.categoric_leg = leg;
        push(s.name());
      }
    } else {
      push(tabenc::parse_scenario(token).name());
    }
  }
  return out;
}

std::vector<std::string> resolve_data_paths(const std::string& data) {
  namespace fs = std::filesystem;
  if (fs::is_directory(data)) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(data)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty())
      throw tabenc::Error("no csv files in directory: " + data);
    return paths;
  }
  return split_commas(data);
}

int run_fit(const std::string& train_path, const std::string& label,
            const std::string& scenario_name, double valid_frac,
            uint64_t seed, const std::string& infill_name, bool indicator,
            const std::string& record_path, const std::string& out_path,
            const std::string& valid_out_path) {
  const RawTable table = tabenc::read_csv_file(train_path);
  const tabenc::Scenario scenario = tabenc::parse_scenario(scenario_name);
  const tabenc::InfillStrategy infill =
      tabenc::infill_strategy_from_name(infill_name);
  const tabenc::FitResult fit = tabenc::fit_pipeline(
      table, label, scenario, valid_frac, seed, infill, indicator);
  print_warnings(fit.warnings);
  write_file(record_path, tabenc::save_record(fit.record));
  tabenc::write_encoded_csv(fit.train, label, out_path);
  if (!valid_out_path.empty())
    tabenc::write_encoded_csv(fit.validation, label, valid_out_path);
  return 0;
}

int run_apply(const std::string& record_path, const std::string& input_path,
              const std::string& out_path) {
  const tabenc::TransformRecord record =
      tabenc::load_record(read_file(record_path));
  const RawTable table = tabenc::read_csv_file(input_path);
  const tabenc::ApplyResult result = tabenc::apply_pipeline(record, table);
  print_warnings(result.warnings);
  tabenc::write_encoded_csv(result.table, record.label_name, out_path);
  return 0;
}

int run_invert(const std::string& record_path, const std::string& input_path,
               const std::string& features, const std::string& out_path) {
  const tabenc::TransformRecord record =
      tabenc::load_record(read_file(record_path));
  const RawTable encoded = tabenc::read_csv_file(input_path);
  const RawTable recovered =
      tabenc::invert_pipeline(record, encoded, split_commas(features));
  tabenc::write_csv_file(recovered, out_path);
  return 0;
}

int run_drift(const std::string& record_path, const std::string& input_path) {
  const tabenc::TransformRecord record =
      tabenc::load_record(read_file(record_path));
  const RawTable table = tabenc::read_csv_file(input_path);
  const tabenc::DriftReport report = tabenc::drift_report(record, table);
  const nlohmann::json j = report;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_bench_cmd(const std::string& data, const std::string& labels,
                  const std::string& scenarios, size_t reps,
                  double valid_frac, size_t k, size_t patience,
                  size_t max_trials, uint64_t seed,
                  const std::string& report_path,
                  const std::string& csv_path) {
  const std::vector<std::string> paths = resolve_data_paths(data);
  const std::vector<std::string> label_list = split_commas(labels);
  if (label_list.size() != 1 && label_list.size() != paths.size())
    throw std::invalid_argument(
        "need one label, or one label per dataset; got " +
        std::to_string(label_list.size()) + " labels for " +
        std::to_string(paths.size()) + " datasets");

  tabenc::BenchConfig config;
  for (size_t i = 0; i < paths.size(); ++i) {
    tabenc::BenchDataset ds;
    ds.path = paths[i];
    ds.name = std::filesystem::path(paths[i]).stem().string();
    ds.label = label_list.size() == 1 ? label_list[0] : label_list[i];
    config.datasets.push_back(std::move(ds));
  }
  if (!scenarios.empty()) config.scenarios = expand_scenarios(scenarios);
  config.repetitions = reps;
  config.validation_fraction = valid_frac;
  config.k_folds = k;
  config.patience = patience;
  config.max_trials = max_trials;
  config.base_seed = seed;

  const tabenc::BenchReport report = tabenc::run_bench(config);
  const std::string json_bytes = tabenc::emit_report(report, "json");
  if (report_path.empty())
    std::cout << json_bytes;
  else
    write_file(report_path, json_bytes);
  if (!csv_path.empty())
    write_file(csv_path, tabenc::emit_report(report, "csv"));
  return 0;
}

int run_synth(const std::string& kind, size_t rows, size_t categories,
              double separation, uint64_t seed, const std::string& out_path) {
  RawTable table;
  if (kind == "separable")
    table = tabenc::make_separable_dataset(rows, separation, seed);
  else if (kind == "highcard")
    table = tabenc::make_highcard_dataset(rows, categories, seed);
  else if (kind == "skewed")
    table = tabenc::make_skewed_dataset(rows, seed);
  else
    throw std::invalid_argument("unknown synthetic kind: " + kind);
  tabenc::write_csv_file(table, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabenc: tabular encoding pipelines with a tuned-GBDT "
               "benchmark"};
  app.require_subcommand(1);

  // fit
  std::string fit_train, fit_label, fit_scenario = "default";
  std::string fit_record, fit_out, fit_valid_out;
  std::string fit_infill = "simple";
  double fit_valid_frac = 0.25;
  uint64_t fit_seed = 0;
  bool fit_indicator = false;
  auto* fit = app.add_subcommand(
      "fit", "Fit the encoding pipeline on a training csv");
  fit->add_option("--train", fit_train, "training csv")->required();
  fit->add_option("--label", fit_label, "label column name")->required();
  fit->add_option("--scenario", fit_scenario, "encoding scenario name");
  fit->add_option("--valid-frac", fit_valid_frac,
                  "validation fraction in [0, 0.5]");
  fit->add_option("--seed", fit_seed, "base seed");
  fit->add_option("--infill", fit_infill, "missing-data strategy: simple|ml");
  fit->add_flag("--indicator", fit_indicator,
                "append 0/1 missing-indicator columns");
  fit->add_option("--record", fit_record, "transform record output path")
      ->required();
  fit->add_option("--out", fit_out, "encoded train csv output path")
      ->required();
  fit->add_option("--valid-out", fit_valid_out,
                  "encoded validation csv output path");

  // apply
  std::string apply_record, apply_input, apply_out;
  auto* apply = app.add_subcommand(
      "apply", "Encode new data on a fitted record");
  apply->add_option("--record", apply_record, "transform record path")
      ->required();
  apply->add_option("--input", apply_input, "input csv")->required();
  apply->add_option("--out", apply_out, "encoded csv output path")
      ->required();

  // invert
  std::string inv_record, inv_input, inv_features, inv_out;
  auto* invert = app.add_subcommand(
      "invert", "Recover raw columns from an encoded csv");
  invert->add_option("--record", inv_record, "transform record path")
      ->required();
  invert->add_option("--input", inv_input, "encoded csv")->required();
  invert->add_option("--features", inv_features,
                     "comma-separated feature names")
      ->required();
  invert->add_option("--out", inv_out, "recovered csv output path")
      ->required();

  // drift
  std::string drift_record, drift_input;
  auto* drift = app.add_subcommand(
      "drift", "Report distribution drift against the fit-time baseline");
  drift->add_option("--record", drift_record, "transform record path")
      ->required();
  drift->add_option("--input", drift_input, "input csv")->required();

  // bench
  std::string bench_data, bench_labels, bench_scenarios;
  std::string bench_report, bench_csv;
  size_t bench_reps = 5, bench_k = 5, bench_patience = 50;
  size_t bench_max_trials = 200;
  double bench_valid_frac = 0.25;
  uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand(
      "bench", "Sweep encoding scenarios with tuned gradient boosting");
  bench->add_option("--data", bench_data,
                    "directory of csvs, or comma-separated csv list")
      ->required();
  bench->add_option("--label", bench_labels,
                    "label column; one name, or one per csv")
      ->required();
  bench->add_option("--scenarios", bench_scenarios,
                    "comma-separated scenarios; numeric:all and "
                    "categoric:all expand");
  bench->add_option("--reps", bench_reps, "repetitions per scenario");
  bench->add_option("--valid-frac", bench_valid_frac, "validation fraction");
  bench->add_option("--k", bench_k, "tuning cross-validation folds");
  bench->add_option("--patience", bench_patience,
                    "trials without improvement before stopping");
  bench->add_option("--max-trials", bench_max_trials, "tuning trial cap");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--report", bench_report,
                    "json report path (stdout when omitted)");
  bench->add_option("--csv", bench_csv, "per-row csv report path");

  // synth
  std::string synth_kind, synth_out;
  size_t synth_rows = 1000, synth_categories = 64;
  double synth_separation = 4.0;
  uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand(
      "synth", "Generate a bundled synthetic dataset");
  synth->add_option("--kind", synth_kind, "separable|highcard|skewed")
      ->required();
  synth->add_option("--rows", synth_rows, "row count");
  synth->add_option("--categories", synth_categories,
                    "category count (highcard)");
  synth->add_option("--separation", synth_separation,
                    "class separation in sigmas (separable)");
  synth->add_option("--seed", synth_seed, "seed");
  synth->add_option("--out", synth_out, "csv output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_json("usage_error", e.what()) << "\n";
    return 2;
  }

  try {
    if (fit->parsed())
      return run_fit(fit_train, fit_label, fit_scenario, fit_valid_frac,
                     fit_seed, fit_infill, fit_indicator, fit_record, fit_out,
                     fit_valid_out);
    if (apply->parsed()) return run_apply(apply_record, apply_input, apply_out);
    if (invert->parsed())
      return run_invert(inv_record, inv_input, inv_features, inv_out);
    if (drift->parsed()) return run_drift(drift_record, drift_input);
    if (bench->parsed())
      return run_bench_cmd(bench_data, bench_labels, bench_scenarios,
                           bench_reps, bench_valid_frac, bench_k,
                           bench_patience, bench_max_trials, bench_seed,
                           bench_report, bench_csv);
    if (synth->parsed())
      return run_synth(synth_kind, synth_rows, synth_categories,
                       synth_separation, synth_seed, synth_out);
  } catch (const tabenc::VersionMismatchError& e) {
    std::cerr << error_json("version_mismatch", e.what()) << "\n";
    return 1;
  } catch (const tabenc::CorruptPayloadError& e) {
    std::cerr << error_json("corrupt_payload", e.what()) << "\n";
    return 1;
  } catch (const tabenc::NotInvertibleError& e) {
    std::cerr << error_json("not_invertible", e.what()) << "\n";
    return 1;
  } catch (const tabenc::MalformedCodeError& e) {
    std::cerr << error_json("malformed_code", e.what()) << "\n";
    return 1;
  } catch (const tabenc::Error& e) {
    std::cerr << error_json("error", e.what()) << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << error_json("invalid_argument", e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("error", e.what()) << "\n";
    return 1;
  }
  return 0;
}
