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

#include "coopdiag/topology.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <string>
#include <vector>

#include "gen.hpp"

namespace coopdiag {
namespace {

TEST(Topology, ChainDistances) {
  Topology t;
  t.add_edge("c", "p_a");
  t.add_edge("p_a", "p_b");
  t.add_edge("p_b", "p_e");
  t.add_agent("lonely");
  EXPECT_EQ(t.hop_distance("c", "c"), 0u);
  EXPECT_EQ(t.hop_distance("c", "p_e"), 3u);
  EXPECT_EQ(t.hop_distance("p_e", "c"), 3u);
  EXPECT_EQ(t.hop_distance("c", "lonely"), std::nullopt);
  EXPECT_EQ(t.hop_distance("c", "ghost"), std::nullopt);
  EXPECT_DOUBLE_EQ(t.similarity("c", "p_b"), 0.5);
  EXPECT_EQ(t.similarity("c", "lonely"), 0.0);
  EXPECT_TRUE(t.adjacent("p_b", "p_a"));
  EXPECT_EQ(t.size(), 5u);
  EXPECT_THROW(t.add_edge("c", "c"), std::invalid_argument);
}

TEST(Topology, CacheInvalidatedByNewEdges) {
  Topology t;
  t.add_edge("a", "b");
  t.add_edge("b", "c");
  t.add_edge("c", "d");
  EXPECT_EQ(t.hop_distance("a", "d"), 3u);
  t.add_edge("a", "d");
  EXPECT_EQ(t.hop_distance("a", "d"), 1u);
}

TEST(TopologyProperty, MatchesFloydWarshall) {
  testing::Gen g(51);
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;
  for (int c = 0; c < testing::kCases; ++c) {
    const int n = g.integer(1, 14);
    const double density = g.real(0.05, 0.5);
    Topology t;
    std::vector<std::vector<std::size_t>> d(static_cast<std::size_t>(n),
                                            std::vector<std::size_t>(static_cast<std::size_t>(n), kInf));
    auto name = [](int i) { return "n" + std::to_string(i); };
    for (int i = 0; i < n; ++i) {
      t.add_agent(name(i));
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!g.coin(density)) continue;
        t.add_edge(name(i), name(j));
        d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
      }
    }
    for (std::size_t k = 0; k < d.size(); ++k) {
      for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
          d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t expected = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const auto got = t.hop_distance(name(i), name(j));
        if (expected >= kInf) {
          ASSERT_FALSE(got.has_value());
        } else {
          ASSERT_EQ(got, expected);
        }
      }
    }
  }
}

}  // namespace
}  // namespace coopdiag
