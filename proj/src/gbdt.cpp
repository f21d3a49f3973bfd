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

#include "tabenc/gbdt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace tabenc {

namespace {

constexpr double kPriorClip = 1e-6;

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + exp(s)) - y*s without overflow on either tail.
double logistic_loss(double score, double y) {
  if (score > 0.0)
    return (1.0 - y) * score + std::log1p(std::exp(-score));
  return std::log1p(std::exp(score)) - y * score;
}

double split_gain(double gl, double hl, double gr, double hr, double g,
                  double h, double lambda) {
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                g * g / (h + lambda));
}

size_t checked_n_rows(const ColMatrix& cols) {
  if (cols.empty()) throw std::invalid_argument("matrix has no columns");
  const size_t n = cols[0].size();
  for (const auto& c : cols) {
    if (c.size() != n)
      throw std::invalid_argument("matrix columns have unequal lengths");
  }
  if (n == 0) throw std::invalid_argument("matrix has no rows");
  return n;
}

std::vector<std::vector<uint32_t>> presort_columns(const ColMatrix& cols) {
  std::vector<std::vector<uint32_t>> sorted(cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    const auto& v = cols[c];
    auto& idx = sorted[c];
    idx.resize(v.size());
    for (uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&v](uint32_t a, uint32_t b) {
      if (v[a] != v[b]) return v[a] < v[b];
      return a < b;
    });
  }
  return sorted;
}

struct NodeState {
  double sum_g = 0;
  double sum_h = 0;
  size_t count = 0;
  int depth = 0;
  bool open = false;
};

struct NodeBest {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
  double left_g = 0;
  double left_h = 0;
};

// Level-wise exact greedy growth over presorted columns. `node_of` holds 0
// for rows inside this tree and -1 outside; it is consumed as scratch.
Tree grow_tree(const ColMatrix& cols, const std::vector<double>& g,
               const std::vector<double>& h,
               const std::vector<std::vector<uint32_t>>& sorted,
               const std::vector<size_t>& col_index, std::vector<int>& node_of,
               int max_depth, double min_child_weight, double l2_lambda) {
  const size_t n = node_of.size();
  Tree tree;
  tree.nodes.push_back(TreeNode{});
  std::vector<NodeState> state(1);
  state[0].open = true;
  for (size_t r = 0; r < n; ++r) {
    if (node_of[r] != 0) continue;
    state[0].sum_g += g[r];
    state[0].sum_h += h[r];
    ++state[0].count;
  }
  if (state[0].count == 0) throw std::invalid_argument("tree has no rows");

  std::vector<int> frontier{0};
  for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    std::vector<NodeBest> best(tree.nodes.size());

    // Scratch per open node, reset for every column walk.
    std::vector<double> walk_g(tree.nodes.size());
    std::vector<double> walk_h(tree.nodes.size());
    std::vector<size_t> walk_cnt(tree.nodes.size());
    std::vector<double> walk_prev(tree.nodes.size());

    for (size_t c : col_index) {
      for (int nd : frontier) {
        walk_g[nd] = 0;
        walk_h[nd] = 0;
        walk_cnt[nd] = 0;
      }
      const auto& col = cols[c];
      for (uint32_t r : sorted[c]) {
        const int nd = node_of[r];
        if (nd < 0 || !state[nd].open) continue;
        const double v = col[r];
        if (walk_cnt[nd] > 0 && v != walk_prev[nd]) {
          const double thr = 0.5 * (walk_prev[nd] + v);
          // The midpoint must strictly separate the walked rows; rounding
          // can collapse it onto a neighbor for adjacent doubles.
          if (walk_prev[nd] < thr && thr <= v) {
            const double gl = walk_g[nd], hl = walk_h[nd];
            const double gr = state[nd].sum_g - gl;
            const double hr = state[nd].sum_h - hl;
            if (hl >= min_child_weight && hr >= min_child_weight) {
              const double gain = split_gain(gl, hl, gr, hr, state[nd].sum_g,
                                             state[nd].sum_h, l2_lambda);
              if (gain > 0.0 &&
                  (best[nd].feature < 0 || gain > best[nd].gain)) {
                best[nd] = {static_cast<int>(c), thr, gain, gl, hl};
              }
            }
          }
        }
        walk_g[nd] += g[r];
        walk_h[nd] += h[r];
        ++walk_cnt[nd];
        walk_prev[nd] = v;
      }
    }

    std::vector<int> next;
    for (int nd : frontier) {
      if (best[nd].feature < 0) {
        state[nd].open = false;  // stays a leaf
        continue;
      }
      TreeNode& node = tree.nodes[nd];
      node.feature = best[nd].feature;
      node.threshold = best[nd].threshold;
      node.left = static_cast<int>(tree.nodes.size());
      node.right = node.left + 1;
      state[nd].open = false;

      NodeState left, right;
      left.sum_g = best[nd].left_g;
      left.sum_h = best[nd].left_h;
      right.sum_g = state[nd].sum_g - left.sum_g;
      right.sum_h = state[nd].sum_h - left.sum_h;
      left.depth = right.depth = depth + 1;
      left.open = right.open = true;
      tree.nodes.push_back(TreeNode{});
      tree.nodes.push_back(TreeNode{});
      state.push_back(left);
      state.push_back(right);
      next.push_back(node.left);
      next.push_back(node.right);
    }

    if (!next.empty()) {
      for (size_t r = 0; r < n; ++r) {
        const int nd = node_of[r];
        if (nd < 0) continue;
        const TreeNode& node = tree.nodes[nd];
        if (node.feature < 0) continue;
        node_of[r] = cols[node.feature][r] < node.threshold ? node.left
                                                            : node.right;
      }
      // Counts for the children come from one canonical pass.
      for (size_t r = 0; r < n; ++r) {
        const int nd = node_of[r];
        if (nd >= 0 && state[nd].open) ++state[nd].count;
      }
    }
    frontier = std::move(next);
  }

  for (size_t nd = 0; nd < tree.nodes.size(); ++nd) {
    if (tree.nodes[nd].feature < 0)
      tree.nodes[nd].weight =
          -state[nd].sum_g / (state[nd].sum_h + l2_lambda);
  }
  return tree;
}

}  // namespace

HyperParams sample_hyperparams(Rng& rng) {
  HyperParams p;
  p.max_depth = static_cast<int>(rng.uniform_int(2, 8));
  p.learning_rate = std::exp(rng.uniform(std::log(0.01), std::log(0.3)));
  p.rounds = static_cast<int>(rng.uniform_int(50, 500));
  p.min_child_weight = rng.uniform(1.0, 10.0);
  p.subsample = rng.uniform(0.5, 1.0);
  p.colsample = rng.uniform(0.5, 1.0);
  p.l2_lambda = 1.0;
  return p;
}

double Tree::predict_row(const ColMatrix& cols, size_t row) const {
  if (nodes.empty()) return 0.0;
  int nd = 0;
  while (nodes[nd].feature >= 0) {
    nd = cols[nodes[nd].feature][row] < nodes[nd].threshold ? nodes[nd].left
                                                            : nodes[nd].right;
  }
  return nodes[nd].weight;
}

std::optional<SplitCandidate> best_split(const std::vector<double>& values,
                                         const std::vector<double>& gradients,
                                         const std::vector<double>& hessians,
                                         double min_child_weight,
                                         double l2_lambda) {
  const size_t n = values.size();
  if (gradients.size() != n || hessians.size() != n)
    throw std::invalid_argument("split arrays have unequal lengths");
  if (n < 2) return std::nullopt;

  std::vector<uint32_t> idx(n);
  for (uint32_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&values](uint32_t a, uint32_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });

  double total_g = 0, total_h = 0;
  for (size_t i = 0; i < n; ++i) {
    total_g += gradients[i];
    total_h += hessians[i];
  }

  std::optional<SplitCandidate> out;
  double gl = 0, hl = 0, prev = values[idx[0]];
  size_t walked = 0;
  for (uint32_t r : idx) {
    const double v = values[r];
    if (walked > 0 && v != prev) {
      const double thr = 0.5 * (prev + v);
      if (prev < thr && thr <= v && hl >= min_child_weight &&
          total_h - hl >= min_child_weight) {
        const double gain = split_gain(gl, hl, total_g - gl, total_h - hl,
                                       total_g, total_h, l2_lambda);
        if (gain > 0.0 && (!out || gain > out->gain))
          out = SplitCandidate{thr, gain};
      }
    }
    gl += gradients[r];
    hl += hessians[r];
    ++walked;
    prev = v;
  }
  return out;
}

Tree fit_tree(const ColMatrix& cols, const std::vector<double>& gradients,
              const std::vector<double>& hessians,
              const std::vector<size_t>& row_index,
              const std::vector<size_t>& col_index, int max_depth,
              double min_child_weight, double l2_lambda) {
  const size_t n = checked_n_rows(cols);
  if (gradients.size() != n || hessians.size() != n)
    throw std::invalid_argument("gradient arrays must match the row count");
  if (row_index.empty() || col_index.empty())
    throw std::invalid_argument("row and column masks must be non-empty");
  for (size_t c : col_index) {
    if (c >= cols.size()) throw std::invalid_argument("column index range");
  }
  std::vector<int> node_of(n, -1);
  for (size_t r : row_index) {
    if (r >= n) throw std::invalid_argument("row index range");
    node_of[r] = 0;
  }
  const auto sorted = presort_columns(cols);
  return grow_tree(cols, gradients, hessians, sorted, col_index, node_of,
                   max_depth, min_child_weight, l2_lambda);
}

BoostedModel boost_fit(const ColMatrix& cols, const std::vector<int>& labels,
                       const HyperParams& params, uint64_t seed) {
  const size_t n = checked_n_rows(cols);
  if (labels.size() != n)
    throw std::invalid_argument("labels must match the row count");
  for (const auto& c : cols) {
    for (double v : c) {
      if (!std::isfinite(v))
        throw std::invalid_argument("training matrix contains non-finite values");
    }
  }
  int max_label = 0;
  for (int y : labels) {
    if (y < 0) throw std::invalid_argument("labels must be non-negative");
    max_label = std::max(max_label, y);
  }
  const size_t K = static_cast<size_t>(max_label) + 1;
  std::vector<size_t> counts(K, 0);
  for (int y : labels) ++counts[static_cast<size_t>(y)];
  size_t present = 0;
  for (size_t c : counts) present += c > 0 ? 1 : 0;
  if (present < 2)
    throw std::invalid_argument("training labels hold a single class");

  BoostedModel model;
  model.params = params;
  model.n_classes = K;
  model.n_features = cols.size();
  model.base_scores.resize(K);
  model.class_trees.resize(K);
  for (size_t k = 0; k < K; ++k) {
    const double p = std::clamp(
        static_cast<double>(counts[k]) / static_cast<double>(n), kPriorClip,
        1.0 - kPriorClip);
    model.base_scores[k] = std::log(p / (1.0 - p));
    model.class_trees[k].reserve(static_cast<size_t>(params.rounds));
  }

  const auto sorted = presort_columns(cols);
  std::vector<std::vector<double>> scores(K, std::vector<double>(n));
  for (size_t k = 0; k < K; ++k)
    std::fill(scores[k].begin(), scores[k].end(), model.base_scores[k]);

  std::vector<double> g(n), h(n);
  std::vector<int> node_of(n);
  std::vector<size_t> all_cols(cols.size());
  for (size_t c = 0; c < cols.size(); ++c) all_cols[c] = c;

  for (int round = 0; round < params.rounds; ++round) {
    for (size_t k = 0; k < K; ++k) {
      Rng rng(mix_seed(seed, static_cast<uint64_t>(round), k));

      // Fixed draw order: rows first, then columns.
      size_t in_rows = 0;
      if (params.subsample < 1.0) {
        for (size_t i = 0; i < n; ++i) {
          const bool in = rng.uniform() < params.subsample;
          node_of[i] = in ? 0 : -1;
          in_rows += in ? 1 : 0;
        }
      }
      if (params.subsample >= 1.0 || in_rows == 0) {
        std::fill(node_of.begin(), node_of.end(), 0);
      }
      std::vector<size_t> col_index;
      if (params.colsample < 1.0) {
        for (size_t c = 0; c < cols.size(); ++c) {
          if (rng.uniform() < params.colsample) col_index.push_back(c);
        }
      }
      if (col_index.empty()) col_index = all_cols;

      for (size_t i = 0; i < n; ++i) {
        const double p = sigmoid(scores[k][i]);
        const double y = labels[i] == static_cast<int>(k) ? 1.0 : 0.0;
        g[i] = p - y;
        h[i] = p * (1.0 - p);
      }

      Tree tree = grow_tree(cols, g, h, sorted, col_index, node_of,
                            params.max_depth, params.min_child_weight,
                            params.l2_lambda);
      for (size_t i = 0; i < n; ++i)
        scores[k][i] += params.learning_rate * tree.predict_row(cols, i);
      model.class_trees[k].push_back(std::move(tree));
    }

    double loss = 0;
    for (size_t k = 0; k < K; ++k) {
      for (size_t i = 0; i < n; ++i) {
        const double y = labels[i] == static_cast<int>(k) ? 1.0 : 0.0;
        loss += logistic_loss(scores[k][i], y);
      }
    }
    model.train_loss_curve.push_back(loss);
  }
  return model;
}

std::vector<double> predict_proba(const BoostedModel& model,
                                  const ColMatrix& cols, size_t row) {
  if (!model.trained()) throw std::invalid_argument("model is not trained");
  if (cols.size() != model.n_features)
    throw std::invalid_argument("prediction width mismatch");
  std::vector<double> probs(model.n_classes);
  double total = 0;
  for (size_t k = 0; k < model.n_classes; ++k) {
    double score = model.base_scores[k];
    for (const Tree& t : model.class_trees[k])
      score += model.params.learning_rate * t.predict_row(cols, row);
    probs[k] = sigmoid(score);
    total += probs[k];
  }
  for (double& p : probs) p /= total;
  return probs;
}

int predict_class(const BoostedModel& model, const ColMatrix& cols,
                  size_t row) {
  const auto probs = predict_proba(model, cols, row);
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                          probs.begin());
}

std::vector<int> predict_classes(const BoostedModel& model,
                                 const ColMatrix& cols) {
  const size_t n = checked_n_rows(cols);
  std::vector<int> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = predict_class(model, cols, i);
  return out;
}

RegressionModel boost_fit_regression(const ColMatrix& cols,
                                     const std::vector<double>& targets,
                                     const HyperParams& params,
                                     uint64_t seed) {
  const size_t n = checked_n_rows(cols);
  if (targets.size() != n)
    throw std::invalid_argument("targets must match the row count");
  for (double t : targets) {
    if (!std::isfinite(t))
      throw std::invalid_argument("regression targets must be finite");
  }

  RegressionModel model;
  model.params = params;
  model.n_features = cols.size();
  double sum = 0;
  for (double t : targets) sum += t;
  model.base = sum / static_cast<double>(n);
  model.trees.reserve(static_cast<size_t>(params.rounds));

  const auto sorted = presort_columns(cols);
  std::vector<double> pred(n, model.base);
  std::vector<double> g(n);
  const std::vector<double> h(n, 1.0);  // squared error
  std::vector<int> node_of(n);
  std::vector<size_t> all_cols(cols.size());
  for (size_t c = 0; c < cols.size(); ++c) all_cols[c] = c;

  for (int round = 0; round < params.rounds; ++round) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(round), 0));
    size_t in_rows = 0;
    if (params.subsample < 1.0) {
      for (size_t i = 0; i < n; ++i) {
        const bool in = rng.uniform() < params.subsample;
        node_of[i] = in ? 0 : -1;
        in_rows += in ? 1 : 0;
      }
    }
    if (params.subsample >= 1.0 || in_rows == 0)
      std::fill(node_of.begin(), node_of.end(), 0);
    std::vector<size_t> col_index;
    if (params.colsample < 1.0) {
      for (size_t c = 0; c < cols.size(); ++c) {
        if (rng.uniform() < params.colsample) col_index.push_back(c);
      }
    }
    if (col_index.empty()) col_index = all_cols;

    for (size_t i = 0; i < n; ++i) g[i] = pred[i] - targets[i];
    Tree tree = grow_tree(cols, g, h, sorted, col_index, node_of,
                          params.max_depth, params.min_child_weight,
                          params.l2_lambda);
    for (size_t i = 0; i < n; ++i)
      pred[i] += params.learning_rate * tree.predict_row(cols, i);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double predict_regression(const RegressionModel& model, const ColMatrix& cols,
                          size_t row) {
  if (cols.size() != model.n_features)
    throw std::invalid_argument("prediction width mismatch");
  double out = model.base;
  for (const Tree& t : model.trees)
    out += model.params.learning_rate * t.predict_row(cols, row);
  return out;
}

double f1_score(const std::vector<int>& predicted,
                const std::vector<int>& truth, size_t num_classes) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("f1 inputs have unequal lengths");
  if (predicted.empty()) throw std::invalid_argument("f1 inputs are empty");

  size_t K = num_classes;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || truth[i] < 0)
      throw std::invalid_argument("class codes must be non-negative");
    if (K == 0) continue;
    if (static_cast<size_t>(predicted[i]) >= K ||
        static_cast<size_t>(truth[i]) >= K)
      throw std::invalid_argument("class code beyond num_classes");
  }
  if (K == 0) {
    for (size_t i = 0; i < predicted.size(); ++i) {
      K = std::max(K, static_cast<size_t>(predicted[i]) + 1);
      K = std::max(K, static_cast<size_t>(truth[i]) + 1);
    }
  }

  const auto class_f1 = [&](int positive) {
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < predicted.size(); ++i) {
      const bool p = predicted[i] == positive;
      const bool t = truth[i] == positive;
      tp += p && t ? 1 : 0;
      fp += p && !t ? 1 : 0;
      fn += !p && t ? 1 : 0;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
  };

  if (K == 2) return class_f1(1);

  const double n = static_cast<double>(truth.size());
  double weighted = 0;
  for (size_t k = 0; k < K; ++k) {
    size_t support = 0;
    for (int t : truth) support += t == static_cast<int>(k) ? 1 : 0;
    if (support == 0) continue;  // zero weight
    weighted += (static_cast<double>(support) / n) *
                class_f1(static_cast<int>(k));
  }
  return weighted;
}

std::vector<std::vector<size_t>> kfold_indices(size_t n_rows, size_t k,
                                               const std::vector<int>& labels,
                                               uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (k > n_rows) throw std::invalid_argument("k exceeds the row count");
  if (labels.size() != n_rows)
    throw std::invalid_argument("labels must match the row count");

  std::map<int, std::vector<size_t>> groups;
  for (size_t i = 0; i < n_rows; ++i) groups[labels[i]].push_back(i);

  std::vector<std::vector<size_t>> folds(k);
  size_t cursor = 0;  // carried across classes to balance fold sizes
  for (auto& [label, rows] : groups) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(label) + 1));
    rng.shuffle(rows);
    for (size_t r : rows) folds[cursor++ % k].push_back(r);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

TuneResult tune(const ColMatrix& cols, const std::vector<int>& labels,
                size_t k, size_t patience, size_t max_trials, uint64_t seed) {
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (max_trials < 1) throw std::invalid_argument("max_trials must be >= 1");
  const size_t n = checked_n_rows(cols);
  const auto start = std::chrono::steady_clock::now();

  const auto folds = kfold_indices(n, k, labels, mix_seed(seed, 1, 0));
  size_t K = 0;
  for (int y : labels) K = std::max(K, static_cast<size_t>(y) + 1);

  // Fold train/test matrices are shared across trials.
  std::vector<ColMatrix> train_cols(k), test_cols(k);
  std::vector<std::vector<int>> train_labels(k), test_labels(k);
  for (size_t j = 0; j < k; ++j) {
    std::vector<uint8_t> in_fold(n, 0);
    for (size_t r : folds[j]) in_fold[r] = 1;
    train_cols[j].resize(cols.size());
    test_cols[j].resize(cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
      for (size_t r = 0; r < n; ++r) {
        (in_fold[r] ? test_cols[j][c] : train_cols[j][c])
            .push_back(cols[c][r]);
      }
    }
    for (size_t r = 0; r < n; ++r)
      (in_fold[r] ? test_labels[j] : train_labels[j]).push_back(labels[r]);
  }

  TuneResult result;
  result.best_cv_f1 = -std::numeric_limits<double>::infinity();
  size_t since_improve = 0;
  for (size_t t = 0; t < max_trials; ++t) {
    Rng draw(mix_seed(seed, 2, t));
    const HyperParams params = sample_hyperparams(draw);

    double mean_f1 = 0;
    for (size_t j = 0; j < k; ++j) {
      const BoostedModel model = boost_fit(train_cols[j], train_labels[j],
                                           params,
                                           mix_seed(mix_seed(seed, 3, t), j));
      const auto preds = predict_classes(model, test_cols[j]);
      mean_f1 += f1_score(preds, test_labels[j], K);
    }
    mean_f1 /= static_cast<double>(k);
    result.trials.emplace_back(params, mean_f1);

    if (mean_f1 > result.best_cv_f1) {
      result.best_cv_f1 = mean_f1;
      result.best_params = params;
      since_improve = 0;
    } else {
      ++since_improve;
      if (since_improve >= patience) break;
    }
  }

  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

void to_json(nlohmann::json& j, const HyperParams& p) {
  j = nlohmann::json{{"max_depth", p.max_depth},
                     {"learning_rate", p.learning_rate},
                     {"rounds", p.rounds},
                     {"min_child_weight", p.min_child_weight},
                     {"subsample", p.subsample},
                     {"colsample", p.colsample},
                     {"l2_lambda", p.l2_lambda}};
}

void from_json(const nlohmann::json& j, HyperParams& p) {
  j.at("max_depth").get_to(p.max_depth);
  j.at("learning_rate").get_to(p.learning_rate);
  j.at("rounds").get_to(p.rounds);
  j.at("min_child_weight").get_to(p.min_child_weight);
  j.at("subsample").get_to(p.subsample);
  j.at("colsample").get_to(p.colsample);
  j.at("l2_lambda").get_to(p.l2_lambda);
}

void to_json(nlohmann::json& j, const Tree& t) {
  j = nlohmann::json::array();
  for (const TreeNode& n : t.nodes)
    j.push_back({n.feature, n.threshold, n.weight, n.left, n.right});
}

void from_json(const nlohmann::json& j, Tree& t) {
  t.nodes.clear();
  for (const auto& e : j) {
    TreeNode n;
    n.feature = e.at(0).get<int>();
    n.threshold = e.at(1).get<double>();
    n.weight = e.at(2).get<double>();
    n.left = e.at(3).get<int>();
    n.right = e.at(4).get<int>();
    t.nodes.push_back(n);
  }
}

void to_json(nlohmann::json& j, const BoostedModel& m) {
  j = nlohmann::json{{"params", m.params},
                     {"n_classes", m.n_classes},
                     {"n_features", m.n_features},
                     {"base_scores", m.base_scores},
                     {"class_trees", m.class_trees}};
}

void from_json(const nlohmann::json& j, BoostedModel& m) {
  j.at("params").get_to(m.params);
  j.at("n_classes").get_to(m.n_classes);
  j.at("n_features").get_to(m.n_features);
  j.at("base_scores").get_to(m.base_scores);
  j.at("class_trees").get_to(m.class_trees);
  m.train_loss_curve.clear();  // not serialized
}

void to_json(nlohmann::json& j, const RegressionModel& m) {
  j = nlohmann::json{{"params", m.params},
                     {"n_features", m.n_features},
                     {"base", m.base},
                     {"trees", m.trees}};
}

void from_json(const nlohmann::json& j, RegressionModel& m) {
  j.at("params").get_to(m.params);
  j.at("n_features").get_to(m.n_features);
  j.at("base").get_to(m.base);
  j.at("trees").get_to(m.trees);
}

}  // namespace tabenc
