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

#ifndef TABENC_GBDT_HPP_
#define TABENC_GBDT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tabenc/rng.hpp"

namespace tabenc {

/// Column-major numeric matrix; all columns share one length.
using ColMatrix = std::vector<std::vector<double>>;

struct HyperParams {
  int max_depth = 6;           // [2, 8] in the search space
  double learning_rate = 0.1;  // [0.01, 0.3], log scale
  int rounds = 100;            // [50, 500]
  double min_child_weight = 1.0;  // [1, 10]
  double subsample = 1.0;         // [0.5, 1]
  double colsample = 1.0;         // [0.5, 1]
  double l2_lambda = 1.0;         // fixed

  bool operator==(const HyperParams&) const = default;
};

/// One random draw from the tuning space. Draw order is fixed so a seeded
/// Rng always produces the same parameters.
HyperParams sample_hyperparams(Rng& rng);

/// Flat binary tree. A node is a leaf iff feature < 0; children are indices
/// into the owning vector. Leaf weights are the raw -G/(H+lambda) Newton
/// steps; the learning rate scales them at accumulation time.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  double weight = 0;
  int left = -1;
  int right = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root; empty means weight 0

  double predict_row(const ColMatrix& cols, size_t row) const;
};

struct SplitCandidate {
  double threshold = 0;
  double gain = 0;
};

/// Exact greedy search over midpoints of sorted distinct values.
/// gain = 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)]; children must carry
/// hessian weight >= min_child_weight; returns nullopt when no candidate has
/// strictly positive gain. Ties keep the lowest threshold.
std::optional<SplitCandidate> best_split(const std::vector<double>& values,
                                         const std::vector<double>& gradients,
                                         const std::vector<double>& hessians,
                                         double min_child_weight,
                                         double l2_lambda);

/// Greedy recursive tree over the masked rows and columns.
/// `row_index` lists the training rows of this tree; `col_index` the usable
/// columns in ascending order (ties in gain keep the earliest column).
Tree fit_tree(const ColMatrix& cols, const std::vector<double>& gradients,
              const std::vector<double>& hessians,
              const std::vector<size_t>& row_index,
              const std::vector<size_t>& col_index, int max_depth,
              double min_child_weight, double l2_lambda);

/// One-vs-rest Newton-boosted logistic classifier.
struct BoostedModel {
  HyperParams params;
  size_t n_classes = 0;
  size_t n_features = 0;
  std::vector<double> base_scores;           // clipped log-odds priors
  std::vector<std::vector<Tree>> class_trees;  // [class][round]
  std::vector<double> train_loss_curve;  // summed OVR logloss after each round

  bool trained() const { return n_classes > 0; }
};

/// Fits the classifier. Labels must lie in 0..K-1 with K >= 2 classes
/// present. Per round and class the gradients are g = p - y, h = p(1-p) on
/// the current sigmoid scores; trees are fit on seeded row/column subsamples
/// and accumulated at the learning rate.
BoostedModel boost_fit(const ColMatrix& cols, const std::vector<int>& labels,
                       const HyperParams& params, uint64_t seed);

/// Per-class sigmoid scores normalized to sum 1.
std::vector<double> predict_proba(const BoostedModel& model,
                                  const ColMatrix& cols, size_t row);
int predict_class(const BoostedModel& model, const ColMatrix& cols,
                  size_t row);
std::vector<int> predict_classes(const BoostedModel& model,
                                 const ColMatrix& cols);

/// Squared-error Newton boosting (g = pred - y, h = 1) for ml infill.
struct RegressionModel {
  HyperParams params;
  size_t n_features = 0;
  double base = 0;  // train mean
  std::vector<Tree> trees;
};

RegressionModel boost_fit_regression(const ColMatrix& cols,
                                     const std::vector<double>& targets,
                                     const HyperParams& params, uint64_t seed);
double predict_regression(const RegressionModel& model, const ColMatrix& cols,
                          size_t row);

/// f1 in [0,1]. Two observed classes: plain f1 on class 1. Otherwise the
/// support-weighted mean of one-vs-rest f1 scores; classes without support
/// or predictions contribute 0 at weight 0. `num_classes` 0 infers K from
/// the data.
double f1_score(const std::vector<int>& predicted,
                const std::vector<int>& truth, size_t num_classes = 0);

/// Stratified k folds: disjoint, exhaustive, per-class counts within one
/// sample of proportional.
std::vector<std::vector<size_t>> kfold_indices(size_t n_rows, size_t k,
                                               const std::vector<int>& labels,
                                               uint64_t seed);

struct TuneResult {
  HyperParams best_params;
  double best_cv_f1 = 0;
  std::vector<std::pair<HyperParams, double>> trials;
  double wall_time_seconds = 0;
};

/// Random search with cross-validated f1 as the objective. Trial t draws
/// its parameters and fold seeds from (seed, t) so trials are independent
/// of execution order. Stops after `patience` consecutive trials without
/// improvement, or at max_trials.
TuneResult tune(const ColMatrix& cols, const std::vector<int>& labels,
                size_t k, size_t patience, size_t max_trials, uint64_t seed);

// JSON serialization (records embed ml-infill models).
void to_json(nlohmann::json& j, const HyperParams& p);
void from_json(const nlohmann::json& j, HyperParams& p);
void to_json(nlohmann::json& j, const Tree& t);
void from_json(const nlohmann::json& j, Tree& t);
void to_json(nlohmann::json& j, const BoostedModel& m);
void from_json(const nlohmann::json& j, BoostedModel& m);
void to_json(nlohmann::json& j, const RegressionModel& m);
void from_json(const nlohmann::json& j, RegressionModel& m);

}  // namespace tabenc

#endif  // TABENC_GBDT_HPP_
