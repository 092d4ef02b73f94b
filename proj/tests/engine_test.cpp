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

#include "coopdiag/engine.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "gen.hpp"
#include "small_scenario.hpp"

namespace coopdiag {
namespace {

using nlohmann::json;
using testing::leaf_scenario;
using testing::small_scenario;

RunResult run(const json& doc, Strategy strategy, std::uint64_t seed = 1) {
  RunOptions options;
  options.strategy = strategy;
  options.seed = seed;
  return run_simulation(scenario_from_json(doc), options);
}

json with_failure(json doc, json failure) {
  doc["failures"].push_back(std::move(failure));
  return doc;
}

TEST(Engine, LeafServiceTakesProcessingTime) {
  const RunResult r = run(leaf_scenario(), Strategy::Passive);
  ASSERT_EQ(r.records.size(), 5u);
  for (const MetricsRecord& m : r.records) {
    EXPECT_DOUBLE_EQ(m.response_time, 10.0);
    EXPECT_DOUBLE_EQ(m.cost, 4.0);
    EXPECT_FALSE(m.violation);
  }
  EXPECT_DOUBLE_EQ(r.summary.accumulated_cost, 20.0);
  EXPECT_TRUE(r.audit.ok());
}

TEST(Engine, ProviderFailureAddsPenalty) {
  const json doc = with_failure(leaf_scenario(), {{"id", "F"}, {"kind", "provider"}, {"target", "p_a"},
                                                 {"onset_episode", 3}});
  const RunResult r = run(doc, Strategy::Passive);
  EXPECT_DOUBLE_EQ(r.records[1].response_time, 10.0);
  EXPECT_DOUBLE_EQ(r.records[2].response_time, 260.0);
  EXPECT_EQ(r.records[2].active_failures, std::vector<std::string>{"F"});
  EXPECT_TRUE(r.records[1].active_failures.empty());
}

TEST(Engine, LinkFailureDelaysBothDirections) {
  const json doc = with_failure(leaf_scenario(), {{"id", "L"}, {"kind", "link"}, {"link", {"c", "p_a"}},
                                                 {"onset_episode", 1}});
  const RunResult r = run(doc, Strategy::Passive);
  for (const MetricsRecord& m : r.records) EXPECT_DOUBLE_EQ(m.response_time, 510.0);
  EXPECT_EQ(r.summary.final_active_failures, std::vector<std::string>{"L"});
}

TEST(Engine, CostIsAdditiveOverTheChain) {
  const RunResult r = run(small_scenario(), Strategy::Cooperative);
  for (const MetricsRecord& m : r.records) {
    EXPECT_DOUBLE_EQ(m.cost, 10.0);
    EXPECT_FALSE(m.violation);
  }
  EXPECT_EQ(r.summary.violations, 0u);
  EXPECT_TRUE(r.audit.ok());
}

TEST(Engine, RemedialSwitchesToAlternate) {
  const json doc = with_failure(small_scenario(), {{"id", "F"}, {"kind", "provider"}, {"target", "p_b"},
                                                  {"onset_episode", 10}});
  const RunResult r = run(doc, Strategy::Remedial);
  EXPECT_DOUBLE_EQ(r.records[8].cost, 10.0);
  EXPECT_TRUE(r.records[9].violation);
  for (std::size_t i = 10; i < r.records.size(); ++i) {
    EXPECT_DOUBLE_EQ(r.records[i].cost, 14.0) << "episode " << r.records[i].episode;
    EXPECT_FALSE(r.records[i].violation);
  }
  EXPECT_GE(r.audit.mitigations, 1u);
  EXPECT_EQ(r.audit.undos, 0u);
  EXPECT_TRUE(r.audit.ok());
}

TEST(Engine, PassiveBindingsNeverChange) {
  const json doc = with_failure(small_scenario(), {{"id", "F"}, {"kind", "provider"}, {"target", "p_b"},
                                                  {"onset_episode", 5}});
  const RunResult r = run(doc, Strategy::Passive);
  for (const MetricsRecord& m : r.records) EXPECT_DOUBLE_EQ(m.cost, 10.0);
  EXPECT_EQ(r.summary.violations, 16u);
  EXPECT_EQ(r.audit.mitigations, 0u);
  EXPECT_TRUE(r.audit.ok());
}

TEST(Engine, EpisodeOverride) {
  RunOptions options;
  options.episodes = 3;
  const RunResult r = run_simulation(scenario_from_json(small_scenario()), options);
  EXPECT_EQ(r.records.size(), 3u);
  options.episodes = 0;
  EXPECT_THROW(run_simulation(scenario_from_json(small_scenario()), options), SimulationError);
}

TEST(Engine, EventCapStopsRunaways) {
  json doc = small_scenario();
  doc["run"]["event_cap"] = 50;
  EXPECT_THROW(run(doc, Strategy::Passive), SimulationError);
}

TEST(Engine, CsvRowFormat) {
  MetricsRecord m{7, Strategy::Remedial, 12.5, 4.0, true, {"F1", "F2"}};
  EXPECT_EQ(metrics_csv_header(), "episode,strategy,response_time_ms,cost_units,violation,active_failures");
  EXPECT_EQ(to_csv_row(m), "7,remedial,12.500000,4.000000,true,F1;F2");
  m.active_failures.clear();
  m.violation = false;
  EXPECT_EQ(to_csv_row(m), "7,remedial,12.500000,4.000000,false,");
}

TEST(Engine, PhaseStatistics) {
  std::vector<MetricsRecord> records;
  for (int e = 1; e <= 10; ++e) records.push_back({e, Strategy::Passive, e < 4 ? 10.0 : 30.0, 1, false, {}});
  const auto phases = phase_statistics(records, {4, 8}, 10);
  ASSERT_EQ(phases.size(), 3u);
  EXPECT_EQ(phases[0].label, "pre-F1");
  EXPECT_EQ(phases[0].last_episode, 3);
  EXPECT_DOUBLE_EQ(phases[0].mean_response_time, 10.0);
  EXPECT_EQ(phases[1].label, "F1-F2");
  EXPECT_EQ(phases[2].label, "post-F2");
  EXPECT_EQ(phases[2].episodes, 3u);
  EXPECT_EQ(phase_statistics(records, {}, 10).front().label, "all");
}

json jittered_with_failures(testing::Gen& g) {
  json doc = small_scenario();
  doc["run"]["episodes"] = 14;
  for (std::size_t i = 1; i < doc["agents"].size(); ++i) {
    doc["agents"][i]["services"][0]["jitter_ms"] = g.integer(0, 20);
  }
  doc["background_clients"][0]["requests_per_episode"] = g.integer(1, 3);
  doc["failures"].push_back({{"id", "F1"}, {"kind", "provider"}, {"target", "p_b"},
                             {"onset_episode", g.integer(4, 8)}});
  doc["failures"].push_back({{"id", "F2"}, {"kind", "both"}, {"target", "p_c"},
                             {"link", {"p_a", "p_c"}}, {"onset_episode", g.integer(6, 12)}});
  return doc;
}

TEST(EngineProperty, IdenticalSeedsGiveIdenticalLogs) {
  testing::Gen g(61);
  std::set<std::string> distinct;
  for (int c = 0; c < testing::kCases; ++c) {
    const json doc = jittered_with_failures(g);
    const auto strategy = static_cast<Strategy>(g.integer(0, 2));
    const std::uint64_t seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
    const RunResult a = run(doc, strategy, seed);
    const RunResult b = run(doc, strategy, seed);
    ASSERT_EQ(a.log, b.log) << "case " << c;
    ASSERT_EQ(a.summary.accumulated_cost, b.summary.accumulated_cost);
    ASSERT_TRUE(a.audit.ok()) << a.audit.violations.front();
    ASSERT_EQ(a.records.size(), 14u);
    std::string rts;
    for (const auto& r : a.records) rts += std::to_string(r.response_time) + ",";
    distinct.insert(rts);
  }
  EXPECT_GT(distinct.size(), 1u);
}

}  // namespace
}  // namespace coopdiag
