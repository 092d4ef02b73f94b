// Copyright 2026 The coopdiag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopdiag::stats {

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Tukey's fences: values strictly outside [lower, upper] are outliers.
struct Fences {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool degenerate() const { return lower == upper; }
  [[nodiscard]] bool excludes(double x) const { return x < lower || x > upper; }
};

/// A series of measurements of one quality feature with the record time of
/// each measurement. Times must be positive and strictly increasing.
class Sample {
 public:
  Sample(std::vector<double> values, std::vector<double> times)
      : values_(std::move(values)), times_(std::move(times)) {
    if (values_.size() != times_.size()) {
      throw std::domain_error("sample: values and times differ in length");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw std::domain_error("sample: non-finite value at index " + std::to_string(i));
      }
      if (!(times_[i] > 0.0)) {
        throw std::domain_error("sample: non-positive time at index " + std::to_string(i));
      }
      if (i > 0 && !(times_[i] > times_[i - 1])) {
        throw std::domain_error("sample: times not strictly increasing at index " +
                                std::to_string(i));
      }
    }
  }

  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<const double> times() const { return times_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }

 private:
  std::vector<double> values_;
  std::vector<double> times_;
};

namespace detail {

inline void require_nonempty(std::span<const double> values, const char* what) {
  if (values.empty()) {
    throw std::domain_error(std::string(what) + ": empty input");
  }
}

// Median of an already sorted, nonempty range.
inline double sorted_median(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const std::size_t mid = n / 2;
  if (n % 2 == 1) {
    return sorted[mid];
  }
  return (sorted[mid - 1] + sorted[mid]) / 2.0;
}

}  // namespace detail

/// Lower and upper quartiles as the medians of the lower and upper halves.
/// For odd sizes the overall median belongs to neither half. A single value
/// is its own quartiles.
inline Quartiles quartiles(std::span<const double> values) {
  detail::require_nonempty(values, "quartiles");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n == 1) {
    return {sorted[0], sorted[0]};
  }
  const std::size_t half = n / 2;
  const std::span<const double> all(sorted);
  const auto lower = all.first(half);
  const auto upper = all.last(half);
  return {detail::sorted_median(lower), detail::sorted_median(upper)};
}

inline Fences tukey_fences(std::span<const double> values, double k = 1.5) {
  const Quartiles q = quartiles(values);
  const double iqr = q.q3 - q.q1;
  return {q.q1 - k * iqr, q.q3 + k * iqr};
}

/// True when the last element lies strictly outside the fences of the whole list.
inline bool is_anomalous(std::span<const double> values) {
  detail::require_nonempty(values, "is_anomalous");
  return tukey_fences(values).excludes(values.back());
}

/// Weights proportional to record time, normalised to sum to one.
inline std::vector<double> recency_weights(std::span<const double> times) {
  detail::require_nonempty(times, "recency_weights");
  double total = 0.0;
  for (double t : times) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::domain_error("recency_weights: times must be finite and positive");
    }
    total += t;
  }
  std::vector<double> weights;
  weights.reserve(times.size());
  for (double t : times) {
    weights.push_back(t / total);
  }
  return weights;
}

inline double sample_stddev(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    return 0.0;
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

enum class BandwidthRule {
  // 0.9 * s * n^(-1/5)
  Silverman,
  // 0.9 * min(s, IQR / 1.34) * n^(-1/5)
  SilvermanRobust,
  // 1.06 * s * n^(-1/5)
  NormalReference,
};

constexpr double kDefaultBandwidthFloor = 1e-6;

inline double select_bandwidth(std::span<const double> values,
                               BandwidthRule rule = BandwidthRule::Silverman,
                               double floor = kDefaultBandwidthFloor) {
  detail::require_nonempty(values, "select_bandwidth");
  const double n = static_cast<double>(values.size());
  const double s = sample_stddev(values);
  double spread = s;
  double factor = 0.9;
  switch (rule) {
    case BandwidthRule::Silverman:
      break;
    case BandwidthRule::SilvermanRobust: {
      const Quartiles q = quartiles(values);
      spread = std::min(s, (q.q3 - q.q1) / 1.34);
      break;
    }
    case BandwidthRule::NormalReference:
      factor = 1.06;
      break;
  }
  const double h = factor * spread * std::pow(n, -0.2);
  return h > 0.0 ? h : floor;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Weighted Gaussian kernel density estimate.
class DensityModel {
 public:
  DensityModel(std::vector<double> centers, std::vector<double> weights, double bandwidth)
      : centers_(std::move(centers)), weights_(std::move(weights)), bandwidth_(bandwidth) {
    if (centers_.size() != weights_.size() || centers_.empty()) {
      throw std::domain_error("density model: centers and weights must be nonempty and aligned");
    }
    if (!(bandwidth_ > 0.0)) {
      throw std::domain_error("density model: bandwidth must be positive");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (w < 0.0) {
        throw std::domain_error("density model: negative weight");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::domain_error("density model: weights must sum to 1");
    }
  }

  [[nodiscard]] std::span<const double> centers() const { return centers_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] double bandwidth() const { return bandwidth_; }

  [[nodiscard]] double density(double x) const {
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    double f = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      const double z = (x - centers_[i]) / bandwidth_;
      f += weights_[i] * kInvSqrt2Pi * std::exp(-0.5 * z * z) / bandwidth_;
    }
    return f;
  }

  /// Probability mass of the estimate over [lo, hi].
  [[nodiscard]] double interval_mass(double lo, double hi) const {
    if (lo > hi) {
      throw std::domain_error("interval_mass: lower bound exceeds upper bound");
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      mass += weights_[i] * (normal_cdf((hi - centers_[i]) / bandwidth_) -
                             normal_cdf((lo - centers_[i]) / bandwidth_));
    }
    return std::clamp(mass, 0.0, 1.0);
  }

 private:
  std::vector<double> centers_;
  std::vector<double> weights_;
  double bandwidth_;
};

inline double kde_interval_mass(const DensityModel& model, double lo, double hi) {
  return model.interval_mass(lo, hi);
}

struct ProbabilityOptions {
  BandwidthRule rule = BandwidthRule::Silverman;
  double bandwidth_floor = kDefaultBandwidthFloor;
};

inline DensityModel fit_density(const Sample& sample, const ProbabilityOptions& options = {}) {
  const auto values = sample.values();
  return DensityModel(std::vector<double>(values.begin(), values.end()),
                      recency_weights(sample.times()),
                      select_bandwidth(values, options.rule, options.bandwidth_floor));
}

/// Probability that a draw from the recency-weighted density falls outside
/// the Tukey fences of the sample. A sample without spread has no evidence of
/// anomaly and yields 0.
inline double anomaly_probability(const Sample& sample, const ProbabilityOptions& options = {}) {
  detail::require_nonempty(sample.values(), "anomaly_probability");
  const Fences fences = tukey_fences(sample.values());
  if (fences.degenerate()) {
    return 0.0;
  }
  const DensityModel model = fit_density(sample, options);
  return std::clamp(1.0 - model.interval_mass(fences.lower, fences.upper), 0.0, 1.0);
}

}  // namespace coopdiag::stats
