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

#ifndef TABENC_NUMERIC_HPP_
#define TABENC_NUMERIC_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "tabenc/schema.hpp"

namespace tabenc {

// Numeric encoder families. Codes follow the scenario vocabulary used by
// the CLI and the transform record.
enum class NumericKind {
  kNmbr,  // z-score: (x - mean) / stddev
  kMnmx,  // min-max to [0,1] on the train range, unclipped at apply time
  kMnm3,  // min-max over the 0.01/0.99 quantile caps, clipped
  kMean,  // (x - mean) / (max - min)
  kMxab,  // x / max(|x|)
  kBxcx,  // box-cox power transform, then z-score of the transformed train
  kQttf,  // empirical rank into 1000 reference quantiles, then probit
  kBins,  // z-score plus 5 one-hot standard-deviation bins
  kMad3,  // (x - median) / (1.4826 * mad); powertransform fallback leg
};

std::string numeric_kind_name(NumericKind kind);
NumericKind numeric_kind_from_name(const std::string& name);

constexpr size_t kQttfResolution = 1000;
constexpr double kQttfRankClip = 1e-7;
constexpr double kMadConsistency = 1.4826;

/// Fitted parameters of one numeric encoder on one feature. Only the
/// fields of the active kind are meaningful. `degenerate` marks bases
/// whose scale collapsed (stddev 0, max == min, ...): they encode to
/// constant 0 and refuse inversion.
struct NumericBasis {
  NumericKind kind = NumericKind::kNmbr;
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double max = 0;
  double q01 = 0;
  double q99 = 0;
  double absmax = 0;
  double lambda = 0;
  double post_mean = 0;
  double post_stddev = 0;
  double median = 0;
  double mad = 0;
  std::vector<double> ref_quantiles;  // qttf only, ascending
  bool degenerate = false;
};

/// Output column count of one encoded value: 6 for bins, 1 otherwise.
size_t numeric_width(NumericKind kind);

/// Fits a basis on the finite entries of `train_values` (NaN cells are
/// skipped). `stats` must describe the same sample; shared moments are
/// copied from it so every consumer sees identical numbers.
NumericBasis fit_numeric(NumericKind kind, const NumericStats& stats,
                         const std::vector<double>& train_values);

/// Encodes one finite value into `out[0 .. numeric_width(kind))`.
void encode_numeric(const NumericBasis& basis, double value, double* out);
std::vector<double> encode_numeric(const NumericBasis& basis, double value);

struct NumericInverse {
  double value = 0;
  bool lossy = false;  // clipped encodings cannot distinguish the preimage
};

/// Recovers the pre-encoding value from `encoded[0 .. width)`. Exact for
/// affine kinds, interpolation-accurate for qttf, cap-limited for mnm3;
/// bins inverts through its retained z-score component. Throws
/// NotInvertibleError on degenerate bases.
NumericInverse invert_numeric(const NumericBasis& basis,
                              const double* encoded);

/// Box-cox transform of a single positive value.
double boxcox_transform(double value, double lambda);

/// Box-cox log-likelihood of a positive sample at the given lambda;
/// `log_sum` is the precomputed sum of logs of the sample.
double boxcox_loglik(const std::vector<double>& values, double log_sum,
                     double lambda);

/// Maximizes the box-cox log-likelihood over [-2, 2] by golden-section
/// search to a 1e-4 tolerance. Requires >= 8 strictly positive samples.
double fit_boxcox_lambda(const std::vector<double>& train_values);

struct PowerChoice {
  NumericKind chosen = NumericKind::kMnmx;  // one of kBxcx, kMnmx, kMad3
  double skewness = 0;
  double min_value = 0;
  double outlier_fraction = 0;
};

/// Conditional encoder selection from distribution properties:
/// positive-support skewed data takes box-cox, outlier-free data takes
/// min-max, everything else the robust MAD scaling.
PowerChoice select_powertransform(const NumericStats& stats);

/// Standard normal CDF via erfc (accurate in both tails).
double normal_cdf(double x);

/// Inverse standard normal CDF: rational initial guess refined by one
/// Halley step, absolute error well below 1.2e-9.
double inverse_normal_cdf(double p);

void to_json(nlohmann::json& j, const NumericBasis& b);
void from_json(const nlohmann::json& j, NumericBasis& b);

}  // namespace tabenc

#endif  // TABENC_NUMERIC_HPP_
