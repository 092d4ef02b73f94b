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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coopdiag/behavior.hpp"
#include "coopdiag/engine.hpp"

namespace coopdiag {

/// Parses "n..m" (inclusive) or a comma-separated list of seeds.
inline std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  auto number = [](std::string_view s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw std::invalid_argument("invalid seed '" + std::string(s) + "'");
    }
    return std::stoull(std::string(s));
  };
  std::vector<std::uint64_t> seeds;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = number(text.substr(0, dots));
    const auto hi = number(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty seed range '" + std::string(text) + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    seeds.push_back(number(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

inline std::vector<Strategy> parse_strategy_list(std::string_view text) {
  std::vector<Strategy> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    auto s = parse_strategy(piece);
    if (!s) throw std::invalid_argument("unknown strategy '" + std::string(piece) + "'");
    out.push_back(*s);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and sample standard deviation; a single value has deviation 0.
inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return out;
}

struct StrategyAggregate {
  Strategy strategy = Strategy::Passive;
  std::vector<std::uint64_t> seeds;
  std::vector<double> costs;
  std::vector<double> violations;
  [[nodiscard]] MeanStd cost() const { return mean_std(costs); }
  [[nodiscard]] MeanStd violation_count() const { return mean_std(violations); }
};

inline StrategyAggregate aggregate_runs(Strategy strategy, const std::vector<std::uint64_t>& seeds,
                                        const std::vector<RunSummary>& summaries) {
  StrategyAggregate a;
  a.strategy = strategy;
  a.seeds = seeds;
  for (const RunSummary& s : summaries) {
    a.costs.push_back(s.accumulated_cost);
    a.violations.push_back(static_cast<double>(s.violations));
  }
  return a;
}

inline std::string comparison_csv(const std::vector<StrategyAggregate>& rows) {
  std::string out = "strategy,runs,accumulated_cost_mean,accumulated_cost_std,violations_mean,violations_std\n";
  char buf[256];
  for (const StrategyAggregate& a : rows) {
    const MeanStd c = a.cost();
    const MeanStd v = a.violation_count();
    std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%.6f,%.6f,%.6f\n",
                  std::string(to_string(a.strategy)).c_str(), a.costs.size(), c.mean, c.std, v.mean,
                  v.std);
    out += buf;
  }
  return out;
}

/// True when remedial's mean accumulated cost is at least 1.5 times passive's.
inline std::optional<double> remedial_cost_ratio(const std::vector<StrategyAggregate>& rows) {
  const StrategyAggregate* passive = nullptr;
  const StrategyAggregate* remedial = nullptr;
  for (const StrategyAggregate& a : rows) {
    if (a.strategy == Strategy::Passive) passive = &a;
    if (a.strategy == Strategy::Remedial) remedial = &a;
  }
  if (passive == nullptr || remedial == nullptr || passive->cost().mean <= 0.0) return std::nullopt;
  return remedial->cost().mean / passive->cost().mean;
}

inline std::string comparison_table(const std::vector<StrategyAggregate>& rows) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %5s %24s %20s\n", "strategy", "runs", "accumulated cost",
                "violations");
  out << buf;
  for (const StrategyAggregate& a : rows) {
    const MeanStd c = a.cost();
    const MeanStd v = a.violation_count();
    std::snprintf(buf, sizeof buf, "%-12s %5zu %12.3f +- %8.3f %9.2f +- %6.2f\n",
                  std::string(to_string(a.strategy)).c_str(), a.costs.size(), c.mean, c.std, v.mean,
                  v.std);
    out << buf;
  }
  if (auto ratio = remedial_cost_ratio(rows); ratio && *ratio >= 1.5) {
    std::snprintf(buf, sizeof buf, "* remedial accumulated cost is %.2fx passive (>= 1.5x)\n", *ratio);
    out << buf;
  }
  return out.str();
}

inline std::string summary_text(const RunSummary& s) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "accumulated cost: %.6f\n", s.accumulated_cost);
  out << buf;
  out << "violation episodes: " << s.violations << "\n";
  out << "final active failures: " << s.final_active_failures.size();
  if (!s.final_active_failures.empty()) {
    out << " (";
    for (std::size_t i = 0; i < s.final_active_failures.size(); ++i) {
      out << (i ? ", " : "") << s.final_active_failures[i];
    }
    out << ")";
  }
  out << "\n";
  for (const PhaseStat& p : s.phases) {
    std::snprintf(buf, sizeof buf, "mean response time %-8s (episodes %d-%d): %.3f ms\n",
                  p.label.c_str(), p.first_episode, p.last_episode, p.mean_response_time);
    out << buf;
  }
  return out.str();
}

}  // namespace coopdiag
