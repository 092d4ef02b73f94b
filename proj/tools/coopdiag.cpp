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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopdiag/engine.hpp"
#include "coopdiag/report.hpp"
#include "coopdiag/scenario.hpp"

namespace {

using coopdiag::RunOptions;
using coopdiag::RunResult;
using coopdiag::Scenario;

int cmd_validate(const std::string& path) {
  try {
    const auto issues = coopdiag::validate_scenario(coopdiag::read_scenario_file(path));
    if (issues.empty()) {
      std::cout << "valid\n";
      return 0;
    }
    for (const auto& issue : issues) std::cerr << "error: " << issue.to_string() << "\n";
    std::cerr << issues.size() << " error(s) in " << path << "\n";
  } catch (const coopdiag::ScenarioError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue.to_string() << "\n";
  }
  return 1;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << content;
  return static_cast<bool>(out);
}

struct RunArgs {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  std::optional<int> episodes;
  std::string out;
  std::string log;
  std::vector<int> phases;
  bool verbose = false;
};

int cmd_run(const RunArgs& args) {
  const Scenario scenario = coopdiag::load_scenario(args.scenario);
  RunOptions options;
  options.strategy = *coopdiag::parse_strategy(args.strategy);
  options.seed = args.seed;
  options.episodes = args.episodes;
  options.keep_log = !args.log.empty() || args.verbose;
  if (!args.phases.empty()) options.phase_starts = args.phases;
  const RunResult result = coopdiag::run_simulation(scenario, options);

  std::string csv = coopdiag::metrics_csv_header() + "\n";
  for (const auto& r : result.records) csv += coopdiag::to_csv_row(r) + "\n";
  std::ostream& summary_stream = args.out.empty() ? std::cerr : std::cout;
  if (args.out.empty()) {
    std::cout << csv;
  } else if (!write_file(args.out, csv)) {
    return 1;
  }
  if (!args.log.empty()) {
    std::string text;
    for (const auto& line : result.log) text += line + "\n";
    if (!write_file(args.log, text)) return 1;
  }
  if (args.verbose) {
    for (const auto& d : result.diagnoses) {
      summary_stream << "diagnosis " << d.agent << "#" << d.id << " conv "
                     << coopdiag::to_int(d.conversation) << " " << d.feature << ":";
      for (const auto& f : d.findings) {
        summary_stream << " " << coopdiag::to_string(f.cause);
        if (f.interaction) summary_stream << "(" << f.interaction->provider << ")";
        if (f.score) summary_stream << "[" << *f.score << "]";
      }
      summary_stream << "\n";
    }
  }
  summary_stream << coopdiag::summary_text(result.summary);
  if (!result.audit.ok()) {
    for (const auto& v : result.audit.violations) std::cerr << "audit: " << v << "\n";
    return 1;
  }
  return 0;
}

struct CompareArgs {
  std::string scenario;
  std::string strategies;
  std::string seeds;
  std::string out;
};

int cmd_compare(const CompareArgs& args) {
  const Scenario scenario = coopdiag::load_scenario(args.scenario);
  const auto strategies = coopdiag::parse_strategy_list(args.strategies);
  const auto seeds = coopdiag::parse_seed_list(args.seeds);
  std::vector<coopdiag::StrategyAggregate> rows;
  bool audit_ok = true;
  for (auto strategy : strategies) {
    std::vector<coopdiag::RunSummary> summaries;
    for (auto seed : seeds) {
      RunOptions options;
      options.strategy = strategy;
      options.seed = seed;
      options.keep_log = false;
      const RunResult result = coopdiag::run_simulation(scenario, options);
      for (const auto& v : result.audit.violations) {
        std::cerr << "audit (" << coopdiag::to_string(strategy) << ", seed " << seed << "): " << v << "\n";
        audit_ok = false;
      }
      summaries.push_back(result.summary);
    }
    rows.push_back(coopdiag::aggregate_runs(strategy, seeds, summaries));
  }
  std::cout << coopdiag::comparison_table(rows);
  const std::string csv = coopdiag::comparison_csv(rows);
  if (args.out.empty()) {
    std::cout << "\n" << csv;
  } else if (!write_file(args.out, csv)) {
    return 1;
  }
  return audit_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative diagnosis of quality-requirement violations in multiagent systems"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("path", validate_path, "Scenario file")->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one simulation and emit per-episode CSV");
  run->add_option("--scenario", run_args.scenario, "Scenario file")->required();
  run->add_option("--strategy", run_args.strategy, "passive, remedial or cooperative")
      ->required()
      ->check(CLI::IsMember({"passive", "remedial", "cooperative"}));
  run->add_option("--seed", run_args.seed, "Random seed")->required();
  run->add_option("--episodes", run_args.episodes, "Override the episode count")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "CSV output path (default: stdout)");
  run->add_option("--log", run_args.log, "Run log output path");
  run->add_option("--phases", run_args.phases, "Phase start episodes (default: failure onsets)")
      ->delimiter(',');
  run->add_flag("-v,--verbose", run_args.verbose, "Print diagnosis outcomes");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Aggregate accumulated cost over seeds");
  compare->add_option("--scenario", compare_args.scenario, "Scenario file")->required();
  compare->add_option("--strategies", compare_args.strategies, "Comma-separated strategies")
      ->required();
  compare->add_option("--seeds", compare_args.seeds, "n..m or a comma-separated list")->required();
  compare->add_option("--out", compare_args.out, "CSV output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(validate_path);
    if (*run) return cmd_run(run_args);
    if (*compare) return cmd_compare(compare_args);
  } catch (const coopdiag::ScenarioError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue.to_string() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
