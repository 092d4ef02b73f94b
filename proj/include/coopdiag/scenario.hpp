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
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coopdiag/behavior.hpp"
#include "coopdiag/constraint.hpp"
#include "coopdiag/ids.hpp"
#include "coopdiag/topology.hpp"
#include "json.hpp"

namespace coopdiag {

struct ServiceSpec {
  ServiceId name;
  double cost = 0.0;
  double processing_ms = 10.0;
  // Upper bound of the uniform extra processing delay drawn per request.
  double jitter_ms = 0.0;
};

struct RequirementSpec {
  FeatureName feature;
  Constraint constraint;
};

struct BindingSpec {
  ServiceId service;
  AgentId primary;
  std::vector<AgentId> alternates;
};

struct AgentSpec {
  AgentId id;
  std::vector<ServiceSpec> services;
  std::vector<RequirementSpec> requirements;
  Strategy strategy = Strategy::Cooperative;
  std::vector<BindingSpec> bindings;

  [[nodiscard]] const ServiceSpec* service(const ServiceId& name) const {
    for (const ServiceSpec& s : services) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
};

struct BackgroundClientSpec {
  AgentId id;
  ServiceId service;
  AgentId provider;
  int requests_per_episode = 1;
};

enum class FailureKind { Provider, Link, Both };

inline std::string_view to_string(FailureKind k) {
  switch (k) {
    case FailureKind::Provider: return "provider";
    case FailureKind::Link: return "link";
    case FailureKind::Both: return "both";
  }
  return "?";
}

struct FailureSpec {
  std::string id;
  FailureKind kind = FailureKind::Provider;
  std::optional<AgentId> target;
  std::optional<std::pair<AgentId, AgentId>> link;
  int onset_episode = 1;
  double penalty_ms = 250.0;

  [[nodiscard]] bool has_provider_part() const { return kind != FailureKind::Link; }
  [[nodiscard]] bool has_link_part() const { return kind != FailureKind::Provider; }
};

struct RunSpec {
  int episodes = 120;
  double episode_gap_ms = 10000.0;
  double probe_deadline_ms = 5000.0;
  std::optional<std::size_t> probe_quota;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  AgentId top_level_client;
  double background_window_ms = 1000.0;
  // Defaults to ten probe deadlines.
  std::optional<double> give_up_ms;
  std::size_t event_cap = 5'000'000;

  [[nodiscard]] double effective_give_up_ms() const {
    return give_up_ms.value_or(10.0 * probe_deadline_ms);
  }
};

struct Scenario {
  std::vector<FeatureName> features;
  std::vector<AgentSpec> agents;
  std::vector<BackgroundClientSpec> background_clients;
  std::vector<FailureSpec> failures;
  RunSpec run;

  [[nodiscard]] const AgentSpec* agent(const AgentId& id) const {
    for (const AgentSpec& a : agents) {
      if (a.id == id) return &a;
    }
    return nullptr;
  }

  [[nodiscard]] Topology topology() const {
    Topology t;
    for (const AgentSpec& a : agents) t.add_agent(a.id);
    for (const BackgroundClientSpec& b : background_clients) t.add_agent(b.id);
    for (const AgentSpec& a : agents) {
      for (const BindingSpec& b : a.bindings) {
        t.add_edge(a.id, b.primary);
        for (const AgentId& alt : b.alternates) t.add_edge(a.id, alt);
      }
    }
    for (const BackgroundClientSpec& b : background_clients) t.add_edge(b.id, b.provider);
    return t;
  }
};

struct ValidationIssue {
  std::string path;
  std::string message;
  [[nodiscard]] std::string to_string() const { return path + ": " + message; }
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<ValidationIssue> issues)
      : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}
  [[nodiscard]] const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  static std::string summarize(const std::vector<ValidationIssue>& issues) {
    std::string s = "invalid scenario";
    for (const ValidationIssue& i : issues) s += "\n  " + i.to_string();
    return s;
  }
  std::vector<ValidationIssue> issues_;
};

namespace detail {

using json = nlohmann::json;

class ScenarioReader {
 public:
  explicit ScenarioReader(const json& doc) : doc_(doc) {}

  Scenario read() {
    if (!doc_.is_object()) {
      fail("$", "document must be an object");
      return {};
    }
    read_features();
    read_run();
    read_agents();
    read_background();
    read_failures();
    cross_check();
    return std::move(scenario_);
  }

  [[nodiscard]] const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  void fail(std::string path, std::string message) {
    issues_.push_back({std::move(path), std::move(message)});
  }

  static std::string at(const std::string& base, const std::string& key) { return base + "." + key; }
  static std::string at(const std::string& base, std::size_t index) {
    return base + "[" + std::to_string(index) + "]";
  }

  const json* member(const json& obj, const std::string& base, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(at(base, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string_field(const json& obj, const std::string& base, const char* key,
                                          bool required = true) {
    const json* v = member(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string() || v->get<std::string>().empty()) {
      fail(at(base, key), "expected a nonempty string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<double> number_field(const json& obj, const std::string& base, const char* key,
                                     bool required = true) {
    const json* v = member(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(at(base, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::int64_t> integer_field(const json& obj, const std::string& base, const char* key,
                                            bool required = true) {
    const json* v = member(obj, base, key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(at(base, key), "expected an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  const json* array_field(const json& obj, const std::string& base, const char* key, bool required) {
    const json* v = member(obj, base, key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_array()) {
      fail(at(base, key), "expected an array");
      return nullptr;
    }
    return v;
  }

  void read_features() {
    const json* arr = array_field(doc_, "$", "features", true);
    if (arr == nullptr) return;
    std::set<FeatureName> seen;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const json& f = (*arr)[i];
      if (!f.is_string() || f.get<std::string>().empty()) {
        fail(at("$.features", i), "expected a nonempty string");
        continue;
      }
      const std::string name = f.get<std::string>();
      if (name != kResponseTime && name != kCost) {
        fail(at("$.features", i), "feature '" + name + "' is not measured by the simulation");
      }
      if (!seen.insert(name).second) fail(at("$.features", i), "duplicate feature '" + name + "'");
      scenario_.features.push_back(name);
    }
  }

  void read_run() {
    const std::string base = "$.run";
    const json* run = member(doc_, "$", "run", true);
    if (run == nullptr) return;
    if (!run->is_object()) {
      fail(base, "expected an object");
      return;
    }
    RunSpec& r = scenario_.run;
    if (auto v = integer_field(*run, base, "episodes")) {
      if (*v < 1) fail(at(base, "episodes"), "must be at least 1");
      r.episodes = static_cast<int>(*v);
    }
    if (auto v = number_field(*run, base, "episode_gap_ms", false)) {
      if (*v <= 0) fail(at(base, "episode_gap_ms"), "must be positive");
      r.episode_gap_ms = *v;
    }
    if (auto v = number_field(*run, base, "probe_deadline_ms", false)) {
      if (*v <= 0) fail(at(base, "probe_deadline_ms"), "must be positive");
      r.probe_deadline_ms = *v;
    }
    if (auto v = integer_field(*run, base, "probe_quota", false)) {
      if (*v < 1) fail(at(base, "probe_quota"), "must be at least 1");
      r.probe_quota = static_cast<std::size_t>(std::max<std::int64_t>(*v, 1));
    }
    if (auto v = number_field(*run, base, "threshold", false)) {
      if (*v < 0 || *v > 1) fail(at(base, "threshold"), "must lie in [0, 1]");
      r.threshold = *v;
    }
    if (auto v = integer_field(*run, base, "seed", false)) {
      if (*v < 0) fail(at(base, "seed"), "must be nonnegative");
      r.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = string_field(*run, base, "top_level_client")) r.top_level_client = *v;
    if (auto v = number_field(*run, base, "background_window_ms", false)) {
      if (*v < 0) fail(at(base, "background_window_ms"), "must be nonnegative");
      r.background_window_ms = *v;
    }
    if (auto v = number_field(*run, base, "give_up_ms", false)) {
      if (*v <= 0) fail(at(base, "give_up_ms"), "must be positive");
      r.give_up_ms = *v;
    }
    if (auto v = integer_field(*run, base, "event_cap", false)) {
      if (*v < 1) fail(at(base, "event_cap"), "must be at least 1");
      r.event_cap = static_cast<std::size_t>(std::max<std::int64_t>(*v, 1));
    }
    if (r.background_window_ms >= r.episode_gap_ms) {
      fail(at(base, "background_window_ms"), "must be shorter than episode_gap_ms");
    }
  }

  void read_agents() {
    const json* arr = array_field(doc_, "$", "agents", true);
    if (arr == nullptr) return;
    if (arr->empty()) fail("$.agents", "at least one agent is required");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string base = at("$.agents", i);
      const json& a = (*arr)[i];
      if (!a.is_object()) {
        fail(base, "expected an object");
        continue;
      }
      AgentSpec spec;
      if (auto v = string_field(a, base, "id")) spec.id = *v;
      if (const json* services = array_field(a, base, "services", false)) {
        for (std::size_t k = 0; k < services->size(); ++k) {
          read_service((*services)[k], at(at(base, "services"), k), spec);
        }
      }
      if (const json* reqs = array_field(a, base, "requirements", false)) {
        for (std::size_t k = 0; k < reqs->size(); ++k) {
          read_requirement((*reqs)[k], at(at(base, "requirements"), k), spec);
        }
      }
      if (auto v = string_field(a, base, "strategy", false)) {
        if (auto s = parse_strategy(*v)) {
          spec.strategy = *s;
        } else {
          fail(at(base, "strategy"), "unknown strategy '" + *v + "'");
        }
      }
      if (const json* binds = array_field(a, base, "bindings", false)) {
        for (std::size_t k = 0; k < binds->size(); ++k) {
          read_binding((*binds)[k], at(at(base, "bindings"), k), spec);
        }
      }
      agent_paths_[spec.id] = base;
      scenario_.agents.push_back(std::move(spec));
    }
  }

  void read_service(const json& s, const std::string& base, AgentSpec& spec) {
    if (!s.is_object()) {
      fail(base, "expected an object");
      return;
    }
    ServiceSpec svc;
    if (auto v = string_field(s, base, "name")) svc.name = *v;
    if (auto v = number_field(s, base, "cost")) {
      if (*v < 0) fail(at(base, "cost"), "must be nonnegative");
      svc.cost = *v;
    }
    if (auto v = number_field(s, base, "processing_ms")) {
      if (*v <= 0) fail(at(base, "processing_ms"), "must be positive");
      svc.processing_ms = *v;
    }
    if (auto v = number_field(s, base, "jitter_ms", false)) {
      if (*v < 0) fail(at(base, "jitter_ms"), "must be nonnegative");
      svc.jitter_ms = *v;
    }
    if (!svc.name.empty() && spec.service(svc.name) != nullptr) {
      fail(at(base, "name"), "duplicate service '" + svc.name + "'");
    }
    spec.services.push_back(std::move(svc));
  }

  void read_requirement(const json& r, const std::string& base, AgentSpec& spec) {
    if (!r.is_object()) {
      fail(base, "expected an object");
      return;
    }
    auto feature = string_field(r, base, "feature");
    auto text = string_field(r, base, "constraint");
    if (!feature || !text) return;
    if (std::find(scenario_.features.begin(), scenario_.features.end(), *feature) ==
        scenario_.features.end()) {
      fail(at(base, "feature"), "undeclared feature '" + *feature + "'");
    }
    try {
      Constraint c = parse_constraint(*text);
      std::set<FeatureName> used;
      c.collect_features(used);
      for (const FeatureName& f : used) {
        if (std::find(scenario_.features.begin(), scenario_.features.end(), f) ==
            scenario_.features.end()) {
          fail(at(base, "constraint"), "undeclared feature '" + f + "'");
        }
      }
      for (const RequirementSpec& existing : spec.requirements) {
        if (existing.feature == *feature) fail(at(base, "feature"), "duplicate requirement");
      }
      spec.requirements.push_back({*feature, std::move(c)});
    } catch (const ConstraintSyntaxError& e) {
      fail(at(base, "constraint"), e.what());
    }
  }

  void read_binding(const json& b, const std::string& base, AgentSpec& spec) {
    if (!b.is_object()) {
      fail(base, "expected an object");
      return;
    }
    BindingSpec binding;
    if (auto v = string_field(b, base, "service")) binding.service = *v;
    if (auto v = string_field(b, base, "primary")) binding.primary = *v;
    if (const json* alts = array_field(b, base, "alternates", false)) {
      for (std::size_t k = 0; k < alts->size(); ++k) {
        const json& alt = (*alts)[k];
        if (!alt.is_string() || alt.get<std::string>().empty()) {
          fail(at(at(base, "alternates"), k), "expected a nonempty string");
          continue;
        }
        binding.alternates.push_back(alt.get<std::string>());
      }
    }
    for (const BindingSpec& existing : spec.bindings) {
      if (existing.service == binding.service && !binding.service.empty()) {
        fail(at(base, "service"), "duplicate binding for service '" + binding.service + "'");
      }
    }
    binding_paths_[{spec.id, spec.bindings.size()}] = base;
    spec.bindings.push_back(std::move(binding));
  }

  void read_background() {
    const json* arr = array_field(doc_, "$", "background_clients", false);
    if (arr == nullptr) return;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string base = at("$.background_clients", i);
      const json& b = (*arr)[i];
      if (!b.is_object()) {
        fail(base, "expected an object");
        continue;
      }
      BackgroundClientSpec spec;
      if (auto v = string_field(b, base, "id")) spec.id = *v;
      if (auto v = string_field(b, base, "service")) spec.service = *v;
      if (auto v = string_field(b, base, "provider")) spec.provider = *v;
      if (auto v = integer_field(b, base, "requests_per_episode", false)) {
        if (*v < 1) fail(at(base, "requests_per_episode"), "must be at least 1");
        spec.requests_per_episode = static_cast<int>(*v);
      }
      background_paths_.push_back(base);
      scenario_.background_clients.push_back(std::move(spec));
    }
  }

  void read_failures() {
    const json* arr = array_field(doc_, "$", "failures", false);
    if (arr == nullptr) return;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string base = at("$.failures", i);
      const json& f = (*arr)[i];
      if (!f.is_object()) {
        fail(base, "expected an object");
        continue;
      }
      FailureSpec spec;
      if (auto v = string_field(f, base, "id")) spec.id = *v;
      if (auto v = string_field(f, base, "kind")) {
        if (*v == "provider") {
          spec.kind = FailureKind::Provider;
        } else if (*v == "link") {
          spec.kind = FailureKind::Link;
        } else if (*v == "both") {
          spec.kind = FailureKind::Both;
        } else {
          fail(at(base, "kind"), "unknown failure kind '" + *v + "'");
        }
      }
      spec.target = string_field(f, base, "target", spec.has_provider_part());
      if (const json* link = array_field(f, base, "link", spec.has_link_part())) {
        if (link->size() != 2 || !(*link)[0].is_string() || !(*link)[1].is_string()) {
          fail(at(base, "link"), "expected two agent ids");
        } else {
          spec.link = {(*link)[0].get<std::string>(), (*link)[1].get<std::string>()};
        }
      }
      if (auto v = integer_field(f, base, "onset_episode")) spec.onset_episode = static_cast<int>(*v);
      if (auto v = number_field(f, base, "penalty_ms", false)) {
        if (*v < 0) fail(at(base, "penalty_ms"), "must be nonnegative");
        spec.penalty_ms = *v;
      }
      failure_paths_.push_back(base);
      scenario_.failures.push_back(std::move(spec));
    }
  }

  void cross_check() {
    std::set<AgentId> ids;
    for (std::size_t i = 0; i < scenario_.agents.size(); ++i) {
      const AgentSpec& a = scenario_.agents[i];
      if (!a.id.empty() && !ids.insert(a.id).second) {
        fail(at(at("$.agents", i), "id"), "duplicate agent id '" + a.id + "'");
      }
    }
    for (std::size_t i = 0; i < scenario_.background_clients.size(); ++i) {
      const BackgroundClientSpec& b = scenario_.background_clients[i];
      const std::string& base = background_paths_[i];
      if (!b.id.empty() && !ids.insert(b.id).second) {
        fail(at(base, "id"), "duplicate agent id '" + b.id + "'");
      }
      check_provider(at(base, "provider"), b.provider, b.service);
    }

    for (const AgentSpec& a : scenario_.agents) {
      for (std::size_t k = 0; k < a.bindings.size(); ++k) {
        const BindingSpec& b = a.bindings[k];
        const std::string& base = binding_paths_[{a.id, k}];
        check_provider(at(base, "primary"), b.primary, b.service);
        std::set<AgentId> seen{b.primary};
        for (std::size_t j = 0; j < b.alternates.size(); ++j) {
          const std::string path = at(at(base, "alternates"), j);
          if (!seen.insert(b.alternates[j]).second) {
            fail(path, "'" + b.alternates[j] + "' is listed twice for service '" + b.service + "'");
          }
          check_provider(path, b.alternates[j], b.service);
        }
        for (const AgentId& p : seen) {
          if (p == a.id) fail(base, "agent '" + a.id + "' is bound to itself");
        }
      }
    }

    const int episodes = scenario_.run.episodes;
    std::set<std::string> failure_ids;
    const Topology topology = scenario_.topology();
    for (std::size_t i = 0; i < scenario_.failures.size(); ++i) {
      const FailureSpec& f = scenario_.failures[i];
      const std::string& base = failure_paths_[i];
      if (!f.id.empty() && !failure_ids.insert(f.id).second) {
        fail(at(base, "id"), "duplicate failure id '" + f.id + "'");
      }
      if (f.target && !topology.contains(*f.target)) {
        fail(at(base, "target"), "unknown agent '" + *f.target + "'");
      }
      if (f.link) {
        const auto& [x, y] = *f.link;
        if (!topology.contains(x) || !topology.contains(y)) {
          fail(at(base, "link"), "unknown agent in link (" + x + ", " + y + ")");
        } else if (!topology.adjacent(x, y)) {
          fail(at(base, "link"), "agents '" + x + "' and '" + y + "' are not linked");
        }
      }
      if (f.onset_episode < 1 || f.onset_episode > episodes) {
        fail(at(base, "onset_episode"), "onset " + std::to_string(f.onset_episode) +
                                            " lies outside episodes 1.." + std::to_string(episodes));
      }
    }

    const AgentId& top = scenario_.run.top_level_client;
    if (!top.empty()) {
      const AgentSpec* c = scenario_.agent(top);
      if (c == nullptr) {
        fail("$.run.top_level_client", "unknown agent '" + top + "'");
      } else if (c->bindings.size() != 1) {
        fail("$.run.top_level_client", "top-level client must have exactly one binding");
      }
    }
    check_acyclic();
  }

  void check_provider(const std::string& path, const AgentId& provider, const ServiceId& service) {
    if (provider.empty()) return;
    const AgentSpec* p = scenario_.agent(provider);
    if (p == nullptr) {
      fail(path, "unknown agent '" + provider + "'");
    } else if (p->service(service) == nullptr) {
      fail(path, "agent '" + provider + "' does not offer service '" + service + "'");
    }
  }

  // Depth-first search over every possible binding; a cycle would let a
  // request wait on itself.
  void check_acyclic() {
    std::map<AgentId, int> color;
    std::vector<AgentId> stack;
    bool reported = false;
    std::function<void(const AgentId&)> visit = [&](const AgentId& id) {
      color[id] = 1;
      stack.push_back(id);
      if (const AgentSpec* a = scenario_.agent(id)) {
        for (const BindingSpec& b : a->bindings) {
          std::vector<AgentId> providers{b.primary};
          providers.insert(providers.end(), b.alternates.begin(), b.alternates.end());
          for (const AgentId& p : providers) {
            if (scenario_.agent(p) == nullptr || reported) continue;
            if (color[p] == 1) {
              std::string cycle;
              auto from = std::find(stack.begin(), stack.end(), p);
              for (auto it = from; it != stack.end(); ++it) cycle += *it + " -> ";
              fail(agent_paths_[id] + ".bindings", "dependency cycle " + cycle + p);
              reported = true;
            } else if (color[p] == 0) {
              visit(p);
            }
          }
        }
      }
      stack.pop_back();
      color[id] = 2;
    };
    for (const AgentSpec& a : scenario_.agents) {
      if (color[a.id] == 0) visit(a.id);
    }
  }

  const json& doc_;
  Scenario scenario_;
  std::vector<ValidationIssue> issues_;
  std::map<AgentId, std::string> agent_paths_;
  std::map<std::pair<AgentId, std::size_t>, std::string> binding_paths_;
  std::vector<std::string> background_paths_;
  std::vector<std::string> failure_paths_;
};

}  // namespace detail

/// Every problem found in a scenario document, each tagged with its path.
inline std::vector<ValidationIssue> validate_scenario(const nlohmann::json& doc) {
  detail::ScenarioReader reader(doc);
  reader.read();
  return reader.issues();
}

inline Scenario scenario_from_json(const nlohmann::json& doc) {
  detail::ScenarioReader reader(doc);
  Scenario s = reader.read();
  if (!reader.issues().empty()) throw ScenarioError(reader.issues());
  return s;
}

inline nlohmann::json parse_scenario_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError({{"$", std::string("malformed JSON: ") + e.what()}});
  }
}

inline nlohmann::json read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({{"$", "cannot open '" + path + "'"}});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario_text(text.str());
}

inline Scenario load_scenario(const std::string& path) {
  return scenario_from_json(read_scenario_file(path));
}

}  // namespace coopdiag
