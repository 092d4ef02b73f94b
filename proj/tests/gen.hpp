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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace coopdiag::testing {

constexpr int kCases = 250;

// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

  std::vector<double> values(std::size_t n, double lo, double hi) {
    std::vector<double> out(n);
    for (double& v : out) v = real(lo, hi);
    return out;
  }

  // Mostly small integers with occasional large outliers, which exercises ties.
  std::vector<double> latencies(std::size_t n) {
    std::vector<double> out(n);
    for (double& v : out) v = coin(0.1) ? integer(20, 500) : integer(5, 15);
    return out;
  }

  // Strictly increasing positive times.
  std::vector<double> times(std::size_t n) {
    std::vector<double> out(n);
    double t = 0.0;
    for (double& v : out) {
      t += real(0.5, 20.0);
      v = t;
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace coopdiag::testing
