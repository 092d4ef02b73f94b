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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "small_scenario.hpp"

namespace {

struct Output {
  int status = -1;
  std::string text;
};

Output sh(const std::string& args) {
  const std::string cmd = std::string(COOPDIAG_CLI) + " " + args + " 2>&1";
  Output out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.text.append(buf.data(), n);
  const int raw = pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string bundled() { return std::string(COOPDIAG_SOURCE_DIR) + "/scenarios/reference.json"; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("coopdiag_cli_" + name);
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

TEST(Cli, ValidateExitCodes) {
  const Output ok = sh("validate " + bundled());
  EXPECT_EQ(ok.status, 0) << ok.text;
  EXPECT_EQ(ok.text, "valid\n");

  auto doc = coopdiag::testing::small_scenario();
  doc["agents"][1]["bindings"][0]["primary"] = "p_zz";
  const auto bad = temp_path("bad.json");
  std::ofstream(bad) << doc.dump();
  const Output err = sh("validate " + bad.string());
  EXPECT_EQ(err.status, 1);
  EXPECT_NE(err.text.find("$.agents[1].bindings[0].primary"), std::string::npos) << err.text;

  EXPECT_EQ(sh("validate /nonexistent.json").status, 1);
  EXPECT_NE(sh("validate").status, 0);
}

TEST(Cli, RunWritesOneRowPerEpisode) {
  const auto csv = temp_path("run.csv");
  const Output out =
      sh("run --scenario " + bundled() + " --strategy passive --seed 1 --out " + csv.string());
  ASSERT_EQ(out.status, 0) << out.text;
  const auto lines = lines_of(csv);
  ASSERT_EQ(lines.size(), 121u);
  EXPECT_EQ(lines[0], "episode,strategy,response_time_ms,cost_units,violation,active_failures");
  EXPECT_EQ(lines[1].rfind("1,passive,", 0), 0u);
  EXPECT_NE(out.text.find("accumulated cost: 480.000000"), std::string::npos) << out.text;
  EXPECT_NE(out.text.find("pre-F1"), std::string::npos);

  const Output shorter = sh("run --scenario " + bundled() +
                            " --strategy cooperative --seed 2 --episodes 7 --out " + csv.string());
  ASSERT_EQ(shorter.status, 0) << shorter.text;
  EXPECT_EQ(lines_of(csv).size(), 8u);
  EXPECT_NE(sh("run --scenario " + bundled() + " --strategy lazy --seed 1").status, 0);
}

TEST(Cli, RunIsReproducible) {
  const auto a = temp_path("a.csv");
  const auto b = temp_path("b.csv");
  const auto log = temp_path("run.log");
  const std::string base = "run --scenario " + bundled() + " --strategy cooperative --seed 5 --episodes 40";
  ASSERT_EQ(sh(base + " --out " + a.string() + " --log " + log.string()).status, 0);
  ASSERT_EQ(sh(base + " --out " + b.string()).status, 0);
  EXPECT_EQ(lines_of(a), lines_of(b));
  EXPECT_FALSE(lines_of(log).empty());
}

double cost_column_sum(const std::filesystem::path& p) {
  double total = 0.0;
  const auto lines = lines_of(p);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::stringstream ss(lines[i]);
    std::string cell;
    for (int c = 0; c < 4; ++c) std::getline(ss, cell, ',');
    total += std::stod(cell);
  }
  return total;
}

TEST(Cli, CompareSingleSeedHasZeroSpread) {
  const auto out = temp_path("cmp.csv");
  const Output r = sh("compare --scenario " + bundled() +
                      " --strategies cooperative --seeds 3 --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.text;
  const auto lines = lines_of(out);
  ASSERT_EQ(lines.size(), 2u);
  std::stringstream ss(lines[1]);
  std::vector<std::string> cells;
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0], "cooperative");
  EXPECT_EQ(cells[1], "1");
  EXPECT_EQ(cells[3], "0.000000");
  EXPECT_EQ(cells[5], "0.000000");

  const auto run_csv = temp_path("seed3.csv");
  ASSERT_EQ(sh("run --scenario " + bundled() + " --strategy cooperative --seed 3 --out " +
               run_csv.string()).status,
            0);
  EXPECT_NEAR(std::stod(cells[2]), cost_column_sum(run_csv), 1e-4);
}

}  // namespace
