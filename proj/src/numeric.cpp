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

#include "tabenc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tabenc/error.hpp"

namespace tabenc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> finite_values(const std::vector<double>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

std::string numeric_kind_name(NumericKind kind) {
  switch (kind) {
    case NumericKind::kNmbr: return "nmbr";
    case NumericKind::kMnmx: return "mnmx";
    case NumericKind::kMnm3: return "mnm3";
    case NumericKind::kMean: return "mean";
    case NumericKind::kMxab: return "mxab";
    case NumericKind::kBxcx: return "bxcx";
    case NumericKind::kQttf: return "qttf";
    case NumericKind::kBins: return "bins";
    case NumericKind::kMad3: return "mad3";
  }
  throw Error("unreachable numeric kind");
}

NumericKind numeric_kind_from_name(const std::string& name) {
  if (name == "nmbr") return NumericKind::kNmbr;
  if (name == "mnmx") return NumericKind::kMnmx;
  if (name == "mnm3") return NumericKind::kMnm3;
  if (name == "mean") return NumericKind::kMean;
  if (name == "mxab") return NumericKind::kMxab;
  if (name == "bxcx") return NumericKind::kBxcx;
  if (name == "qttf") return NumericKind::kQttf;
  if (name == "bins") return NumericKind::kBins;
  if (name == "mad3") return NumericKind::kMad3;
  throw Error("unknown numeric kind: " + name);
}

size_t numeric_width(NumericKind kind) {
  return kind == NumericKind::kBins ? 6 : 1;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("inverse_normal_cdf needs p in (0,1)");

  // Acklam's rational approximation as the initial guess.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement against the erfc-based CDF pins the error near
  // machine precision.
  for (int i = 0; i < 3; ++i) {
    const double err = normal_cdf(x) - p;
    if (err == 0.0) break;
    const double u = err * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

double boxcox_transform(double value, double lambda) {
  if (lambda == 0.0) return std::log(value);
  return (std::pow(value, lambda) - 1.0) / lambda;
}

double boxcox_loglik(const std::vector<double>& values, double log_sum,
                     double lambda) {
  const size_t n = values.size();
  std::vector<double> transformed(n);
  for (size_t i = 0; i < n; ++i)
    transformed[i] = boxcox_transform(values[i], lambda);
  double mean = 0;
  for (double t : transformed) mean += t;
  mean /= static_cast<double>(n);
  double ss = 0;
  for (double t : transformed) {
    const double d = t - mean;
    ss += d * d;
  }
  const double var = std::max(ss / static_cast<double>(n), 1e-300);
  return (lambda - 1.0) * log_sum -
         0.5 * static_cast<double>(n) * std::log(var);
}

double fit_boxcox_lambda(const std::vector<double>& train_values) {
  std::vector<double> vals = finite_values(train_values);
  if (vals.size() < 8)
    throw std::invalid_argument("box-cox fit needs at least 8 samples");
  double log_sum = 0;
  for (double v : vals) {
    if (v <= 0.0)
      throw std::invalid_argument("box-cox requires strictly positive data");
    log_sum += std::log(v);
  }

  // Golden-section maximization on [-2, 2].
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -2.0, hi = 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = boxcox_loglik(vals, log_sum, c);
  double fd = boxcox_loglik(vals, log_sum, d);
  while (hi - lo > 1e-4) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = boxcox_loglik(vals, log_sum, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = boxcox_loglik(vals, log_sum, d);
    }
  }
  return 0.5 * (lo + hi);
}

NumericBasis fit_numeric(NumericKind kind, const NumericStats& stats,
                         const std::vector<double>& train_values) {
  std::vector<double> vals = finite_values(train_values);
  if (vals.empty())
    throw std::invalid_argument("numeric fit needs at least one finite value");

  NumericBasis basis;
  basis.kind = kind;
  switch (kind) {
    case NumericKind::kNmbr:
      basis.mean = stats.mean;
      basis.stddev = stats.stddev;
      basis.degenerate = basis.stddev == 0.0;
      break;
    case NumericKind::kMnmx:
    case NumericKind::kMean:
      basis.mean = stats.mean;
      basis.min = stats.min;
      basis.max = stats.max;
      basis.degenerate = basis.max == basis.min;
      break;
    case NumericKind::kMnm3:
      basis.q01 = stats.q01;
      basis.q99 = stats.q99;
      basis.degenerate = basis.q99 == basis.q01;
      break;
    case NumericKind::kMxab:
      basis.absmax = std::max(std::fabs(stats.min), std::fabs(stats.max));
      // A collapsed range is degenerate for every kind, even though x/absmax
      // alone would still be well defined for constant nonzero data.
      basis.degenerate = basis.absmax == 0.0 || stats.min == stats.max;
      break;
    case NumericKind::kBxcx: {
      basis.lambda = fit_boxcox_lambda(vals);
      double sum = 0;
      std::vector<double> transformed(vals.size());
      for (size_t i = 0; i < vals.size(); ++i) {
        transformed[i] = boxcox_transform(vals[i], basis.lambda);
        sum += transformed[i];
      }
      basis.post_mean = sum / static_cast<double>(vals.size());
      double ss = 0;
      for (double t : transformed) {
        const double dd = t - basis.post_mean;
        ss += dd * dd;
      }
      basis.post_stddev = std::sqrt(ss / static_cast<double>(vals.size()));
      basis.degenerate = basis.post_stddev == 0.0 || stats.min == stats.max;
      break;
    }
    case NumericKind::kQttf: {
      std::sort(vals.begin(), vals.end());
      basis.ref_quantiles.resize(kQttfResolution);
      for (size_t i = 0; i < kQttfResolution; ++i) {
        const double p = static_cast<double>(i) /
                         static_cast<double>(kQttfResolution - 1);
        basis.ref_quantiles[i] = quantile_sorted(vals, p);
      }
      basis.degenerate =
          basis.ref_quantiles.front() == basis.ref_quantiles.back();
      break;
    }
    case NumericKind::kBins:
      basis.mean = stats.mean;
      basis.stddev = stats.stddev;
      basis.degenerate = basis.stddev == 0.0;
      break;
    case NumericKind::kMad3:
      basis.median = stats.median;
      basis.mad = stats.mad;
      basis.degenerate = basis.mad == 0.0;
      break;
  }
  return basis;
}

namespace {

// Rank of `x` within the reference quantiles with plateau averaging: the
// leftmost and rightmost consistent interpolation positions are averaged so
// ties map to the middle of their probability mass.
double qttf_rank(const std::vector<double>& q, double x) {
  const size_t n = q.size();
  const auto grid = [n](size_t i) {
    return static_cast<double>(i) / static_cast<double>(n - 1);
  };

  double left;
  {
    const auto it = std::lower_bound(q.begin(), q.end(), x);
    if (it == q.end()) {
      left = 1.0;
    } else if (it == q.begin()) {
      left = 0.0;
    } else if (*it == x) {
      left = grid(static_cast<size_t>(it - q.begin()));
    } else {
      const size_t j = static_cast<size_t>(it - q.begin());
      left = grid(j - 1) +
             (x - q[j - 1]) * (grid(j) - grid(j - 1)) / (q[j] - q[j - 1]);
    }
  }
  double right;
  {
    const auto it = std::upper_bound(q.begin(), q.end(), x);
    if (it == q.begin()) {
      right = 0.0;
    } else if (it == q.end()) {
      right = 1.0;
    } else {
      const size_t j = static_cast<size_t>(it - q.begin());
      if (q[j - 1] == x) {
        right = grid(j - 1);
      } else {
        right = grid(j - 1) +
                (x - q[j - 1]) * (grid(j) - grid(j - 1)) / (q[j] - q[j - 1]);
      }
    }
  }
  return 0.5 * (left + right);
}

}  // namespace

void encode_numeric(const NumericBasis& basis, double value, double* out) {
  switch (basis.kind) {
    case NumericKind::kNmbr:
      out[0] = basis.degenerate ? 0.0 : (value - basis.mean) / basis.stddev;
      break;
    case NumericKind::kMnmx:
      out[0] = basis.degenerate
                   ? 0.0
                   : (value - basis.min) / (basis.max - basis.min);
      break;
    case NumericKind::kMnm3: {
      if (basis.degenerate) {
        out[0] = 0.0;
        break;
      }
      const double clipped = std::clamp(value, basis.q01, basis.q99);
      out[0] = (clipped - basis.q01) / (basis.q99 - basis.q01);
      break;
    }
    case NumericKind::kMean:
      out[0] = basis.degenerate
                   ? 0.0
                   : (value - basis.mean) / (basis.max - basis.min);
      break;
    case NumericKind::kMxab:
      out[0] = basis.degenerate ? 0.0 : value / basis.absmax;
      break;
    case NumericKind::kBxcx: {
      if (basis.degenerate) {
        out[0] = 0.0;
        break;
      }
      // Apply-time values at or below zero sit outside the transform's
      // domain; clamp keeps the encoder total.
      const double x = std::max(value, 1e-12);
      const double t = boxcox_transform(x, basis.lambda);
      out[0] = (t - basis.post_mean) / basis.post_stddev;
      break;
    }
    case NumericKind::kQttf: {
      if (basis.degenerate) {
        out[0] = 0.0;
        break;
      }
      double p = qttf_rank(basis.ref_quantiles, value);
      p = std::clamp(p, kQttfRankClip, 1.0 - kQttfRankClip);
      out[0] = inverse_normal_cdf(p);
      break;
    }
    case NumericKind::kBins: {
      const double z =
          basis.degenerate ? 0.0 : (value - basis.mean) / basis.stddev;
      out[0] = z;
      for (int i = 1; i <= 5; ++i) out[i] = 0.0;
      int bin;
      if (z < -2.0) bin = 0;
      else if (z < -1.0) bin = 1;
      else if (z < 1.0) bin = 2;
      else if (z < 2.0) bin = 3;
      else bin = 4;
      out[1 + bin] = 1.0;
      break;
    }
    case NumericKind::kMad3:
      out[0] = basis.degenerate
                   ? 0.0
                   : (value - basis.median) / (kMadConsistency * basis.mad);
      break;
  }
}

std::vector<double> encode_numeric(const NumericBasis& basis, double value) {
  std::vector<double> out(numeric_width(basis.kind));
  encode_numeric(basis, value, out.data());
  return out;
}

NumericInverse invert_numeric(const NumericBasis& basis,
                              const double* encoded) {
  if (basis.degenerate)
    throw NotInvertibleError("degenerate basis has no unique preimage");
  const double e = encoded[0];
  NumericInverse inv;
  switch (basis.kind) {
    case NumericKind::kNmbr:
      inv.value = basis.mean + e * basis.stddev;
      break;
    case NumericKind::kMnmx:
      inv.value = basis.min + e * (basis.max - basis.min);
      break;
    case NumericKind::kMnm3: {
      const double clipped = std::clamp(e, 0.0, 1.0);
      inv.value = basis.q01 + clipped * (basis.q99 - basis.q01);
      inv.lossy = e <= 0.0 || e >= 1.0;  // cap values are not injective
      break;
    }
    case NumericKind::kMean:
      inv.value = basis.mean + e * (basis.max - basis.min);
      break;
    case NumericKind::kMxab:
      inv.value = e * basis.absmax;
      break;
    case NumericKind::kBxcx: {
      const double t = basis.post_mean + e * basis.post_stddev;
      if (basis.lambda == 0.0) {
        inv.value = std::exp(t);
      } else {
        const double s = basis.lambda * t + 1.0;
        if (s <= 0.0)
          throw NotInvertibleError(
              "encoded value outside the box-cox transform range");
        inv.value = std::pow(s, 1.0 / basis.lambda);
      }
      break;
    }
    case NumericKind::kQttf: {
      const double p = normal_cdf(e);
      const auto& q = basis.ref_quantiles;
      const double h =
          std::clamp(p, 0.0, 1.0) * static_cast<double>(q.size() - 1);
      const size_t lo = std::min(static_cast<size_t>(h), q.size() - 2);
      const double frac = h - static_cast<double>(lo);
      inv.value = q[lo] + frac * (q[lo + 1] - q[lo]);
      inv.lossy = p <= kQttfRankClip || p >= 1.0 - kQttfRankClip;
      break;
    }
    case NumericKind::kBins:
      // The retained z-score component carries the preimage.
      inv.value = basis.mean + e * basis.stddev;
      break;
    case NumericKind::kMad3:
      inv.value = basis.median + e * kMadConsistency * basis.mad;
      break;
  }
  return inv;
}

PowerChoice select_powertransform(const NumericStats& stats) {
  PowerChoice choice;
  choice.skewness = stats.skewness;
  choice.min_value = stats.min;
  choice.outlier_fraction = stats.outlier_fraction;
  if (stats.min > 0.0 && std::fabs(stats.skewness) > 1.0) {
    choice.chosen = NumericKind::kBxcx;
  } else if (stats.outlier_fraction == 0.0) {
    choice.chosen = NumericKind::kMnmx;
  } else {
    choice.chosen = NumericKind::kMad3;
  }
  return choice;
}

void to_json(nlohmann::json& j, const NumericBasis& b) {
  j = nlohmann::json{{"kind", numeric_kind_name(b.kind)},
                     {"mean", b.mean},
                     {"stddev", b.stddev},
                     {"min", b.min},
                     {"max", b.max},
                     {"q01", b.q01},
                     {"q99", b.q99},
                     {"absmax", b.absmax},
                     {"lambda", b.lambda},
                     {"post_mean", b.post_mean},
                     {"post_stddev", b.post_stddev},
                     {"median", b.median},
                     {"mad", b.mad},
                     {"ref_quantiles", b.ref_quantiles},
                     {"degenerate", b.degenerate}};
}

void from_json(const nlohmann::json& j, NumericBasis& b) {
  b.kind = numeric_kind_from_name(j.at("kind").get<std::string>());
  j.at("mean").get_to(b.mean);
  j.at("stddev").get_to(b.stddev);
  j.at("min").get_to(b.min);
  j.at("max").get_to(b.max);
  j.at("q01").get_to(b.q01);
  j.at("q99").get_to(b.q99);
  j.at("absmax").get_to(b.absmax);
  j.at("lambda").get_to(b.lambda);
  j.at("post_mean").get_to(b.post_mean);
  j.at("post_stddev").get_to(b.post_stddev);
  j.at("median").get_to(b.median);
  j.at("mad").get_to(b.mad);
  j.at("ref_quantiles").get_to(b.ref_quantiles);
  j.at("degenerate").get_to(b.degenerate);
}

}  // namespace tabenc
