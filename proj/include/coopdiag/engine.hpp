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
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coopdiag/behavior.hpp"
#include "coopdiag/protocol.hpp"
#include "coopdiag/scenario.hpp"
#include "coopdiag/topology.hpp"

namespace coopdiag {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MetricsRecord {
  int episode = 0;
  Strategy strategy = Strategy::Passive;
  double response_time = 0.0;
  double cost = 0.0;
  bool violation = false;
  std::vector<std::string> active_failures;
};

struct PhaseStat {
  std::string label;
  int first_episode = 0;
  int last_episode = 0;
  std::size_t episodes = 0;
  double mean_response_time = 0.0;
};

struct RunSummary {
  double accumulated_cost = 0.0;
  std::size_t violations = 0;
  std::vector<std::string> final_active_failures;
  std::vector<PhaseStat> phases;
  std::size_t messages = 0;
  std::size_t events = 0;
};

struct AuditReport {
  std::vector<std::string> violations;
  std::size_t service_requests = 0;
  std::size_t probes = 0;
  std::size_t mitigations = 0;
  std::size_t undos = 0;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

struct RunOptions {
  Strategy strategy = Strategy::Cooperative;
  std::uint64_t seed = 1;
  std::optional<int> episodes;
  // Phase boundaries; defaults to the failure onsets.
  std::optional<std::vector<int>> phase_starts;
  bool keep_log = true;
};

struct RunResult {
  std::vector<MetricsRecord> records;
  RunSummary summary;
  AuditReport audit;
  std::vector<std::string> log;
  std::vector<DiagnosisOutcome> diagnoses;
};

inline std::string metrics_csv_header() {
  return "episode,strategy,response_time_ms,cost_units,violation,active_failures";
}

inline std::string to_csv_row(const MetricsRecord& r) {
  std::string failures;
  for (std::size_t i = 0; i < r.active_failures.size(); ++i) {
    if (i > 0) failures += ';';
    failures += r.active_failures[i];
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d,%s,%.6f,%.6f,%s,", r.episode,
                std::string(to_string(r.strategy)).c_str(), r.response_time, r.cost,
                r.violation ? "true" : "false");
  return buf + failures;
}

/// Mean response time per phase; phase k spans [starts[k], starts[k+1]).
inline std::vector<PhaseStat> phase_statistics(const std::vector<MetricsRecord>& records,
                                               std::vector<int> starts, int episodes) {
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  std::vector<int> bounds{1};
  for (int s : starts) {
    if (s > 1 && s <= episodes) bounds.push_back(s);
  }
  bounds.push_back(episodes + 1);
  std::vector<PhaseStat> out;
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    PhaseStat p;
    p.first_episode = bounds[k];
    p.last_episode = bounds[k + 1] - 1;
    if (bounds.size() == 2) {
      p.label = "all";
    } else if (k == 0) {
      p.label = "pre-F1";
    } else if (k + 2 == bounds.size()) {
      p.label = "post-F" + std::to_string(k);
    } else {
      p.label = "F" + std::to_string(k) + "-F" + std::to_string(k + 1);
    }
    double sum = 0.0;
    for (const MetricsRecord& r : records) {
      if (r.episode >= p.first_episode && r.episode <= p.last_episode) {
        sum += r.response_time;
        ++p.episodes;
      }
    }
    p.mean_response_time = p.episodes > 0 ? sum / static_cast<double>(p.episodes) : 0.0;
    out.push_back(p);
  }
  return out;
}

namespace detail {

/// Uniform double in [0, 1) built from the top 53 bits, so draws do not
/// depend on the standard library's distribution implementation.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// One deterministic run of a scenario under a fixed strategy.
class Simulation {
 public:
  Simulation(const Scenario& scenario, RunOptions options)
      : scenario_(scenario),
        options_(std::move(options)),
        topology_(scenario.topology()),
        rng_(options_.seed),
        episodes_(options_.episodes.value_or(scenario.run.episodes)) {
    if (episodes_ < 1) throw SimulationError("episode count must be positive");
    DiagnosisConfig config;
    config.threshold = scenario.run.threshold;
    config.probe_deadline_ms = scenario.run.probe_deadline_ms;
    config.probe_quota = scenario.run.probe_quota;
    config.give_up_ms = scenario.run.effective_give_up_ms();
    for (const AgentSpec& spec : scenario.agents) {
      QualityRequirement requirements;
      for (const RequirementSpec& r : spec.requirements) requirements.emplace(r.feature, r.constraint);
      auto node = std::make_unique<Node>(*this, Agent(spec.id, options_.strategy, requirements, config));
      node->spec = &spec;
      for (const BindingSpec& b : spec.bindings) {
        Binding binding;
        binding.candidates.push_back(b.primary);
        binding.candidates.insert(binding.candidates.end(), b.alternates.begin(), b.alternates.end());
        node->bindings.emplace(b.service, std::move(binding));
        node->binding_order.push_back(b.service);
      }
      nodes_.emplace(spec.id, std::move(node));
    }
    for (const BackgroundClientSpec& spec : scenario.background_clients) {
      nodes_.emplace(spec.id,
                     std::make_unique<Node>(*this, Agent(spec.id, options_.strategy, {}, config)));
    }
    for (const FailureSpec& f : scenario.failures) failures_.push_back(FailureState{&f});
  }

  RunResult run() {
    for (int k = 1; k <= episodes_; ++k) {
      push(episode_start(k), EpisodeStart{k});
    }
    while (!events_.empty()) {
      if (++processed_ > scenario_.run.event_cap) {
        throw SimulationError("run did not quiesce within " +
                              std::to_string(scenario_.run.event_cap) + " events");
      }
      Event e = events_.top();
      events_.pop();
      now_ = e.time;
      std::visit([this](auto& body) { handle(body); }, e.body);
    }
    snapshot_failures(episodes_);
    return finish();
  }

  [[nodiscard]] const Topology& topology() const { return topology_; }

 private:
  struct Binding {
    std::vector<AgentId> candidates;
    std::size_t current = 0;
    std::vector<std::size_t> undo_stack;
    [[nodiscard]] const AgentId& provider() const { return candidates[current]; }
  };

  struct Job {
    Message request;
    std::set<std::uint64_t> pending;
    double sub_cost = 0.0;
  };

  struct Node;

  class Hooks : public RemediationHooks {
   public:
    explicit Hooks(Node& node) : node_(node) {}
    bool self_healing() override { return node_.sim.self_healing(node_); }
    bool mitigate(const ServiceId& s) override { return node_.sim.mitigate(node_, s); }
    bool repair_link(const AgentId& p) override { return node_.sim.repair_link(node_, p); }
    bool undo(const ServiceId& s) override { return node_.sim.undo(node_, s); }

   private:
    Node& node_;
  };

  class Port : public AgentPort {
   public:
    explicit Port(Node& node) : node_(node) {}
    [[nodiscard]] double now() const override { return node_.sim.now_; }
    MessageFactory& messages() override { return node_.sim.factory_; }
    void send(const Message& m) override { node_.sim.send(m); }
    void schedule(double at, const TimerKey& key) override {
      node_.sim.push(at, TimerFire{node_.agent.id(), key});
    }
    [[nodiscard]] double similarity(const AgentId& other) const override {
      return node_.sim.topology_.similarity(node_.agent.id(), other);
    }
    RemediationHooks& hooks() override { return node_.hooks; }
    void annotate(const std::string& text) override { node_.sim.annotate(text); }

   private:
    Node& node_;
  };

  struct Node {
    Node(Simulation& s, Agent a) : sim(s), agent(std::move(a)), hooks(*this), port(*this) {}
    Simulation& sim;
    Agent agent;
    const AgentSpec* spec = nullptr;
    std::map<ServiceId, Binding> bindings;
    std::vector<ServiceId> binding_order;
    std::deque<Message> queue;
    std::optional<Job> job;
    Hooks hooks;
    Port port;
  };

  struct FailureState {
    const FailureSpec* spec = nullptr;
    bool provider_active = false;
    bool link_active = false;
    [[nodiscard]] bool active() const { return provider_active || link_active; }
  };

  struct EpisodeStart { int episode; };
  struct Fire { AgentId client; ServiceId service; AgentId provider; int episode; };
  struct Deliver { Message message; AgentId receiver; };
  struct Complete { AgentId agent; };
  struct TimerFire { AgentId agent; TimerKey key; };

  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    std::variant<EpisodeStart, Fire, Deliver, Complete, TimerFire> body;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  struct EpisodeData {
    std::optional<double> response_time;
    std::optional<double> cost;
    bool violation = false;
    std::vector<std::string> active_failures;
  };

  // Delivery bookkeeping for the audit.
  struct ProbeDelivery {
    double time;
    AgentId sender;
  };

  template <typename T>
  void push(double time, T body) {
    events_.push(Event{time, next_seq_++, std::move(body)});
  }

  [[nodiscard]] double episode_start(int k) const {
    return static_cast<double>(k) * scenario_.run.episode_gap_ms;
  }

  Node& node(const AgentId& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw SimulationError("unknown agent '" + id + "'");
    return *it->second;
  }

  void annotate(const std::string& text) {
    if (!options_.keep_log) return;
    char buf[48];
    std::snprintf(buf, sizeof buf, "# t=%.3f ", now_);
    log_.push_back(buf + text);
  }

  // Events ----------------------------------------------------------------

  void handle(EpisodeStart& e) {
    if (e.episode > 1) snapshot_failures(e.episode - 1);
    current_episode_ = e.episode;
    annotate("episode " + std::to_string(e.episode) + " starts");
    for (FailureState& f : failures_) {
      if (f.spec->onset_episode != e.episode) continue;
      f.provider_active = f.spec->has_provider_part();
      f.link_active = f.spec->has_link_part();
      annotate("failure " + f.spec->id + " injected (" + std::string(to_string(f.spec->kind)) + ")");
    }
    Node& top = node(scenario_.run.top_level_client);
    const ServiceId& service = top.binding_order.front();
    push(now_, Fire{top.agent.id(), service, top.bindings.at(service).provider(), e.episode});
    for (const BackgroundClientSpec& b : scenario_.background_clients) {
      for (int r = 0; r < b.requests_per_episode; ++r) {
        const double offset = detail::unit_draw(rng_) * scenario_.run.background_window_ms;
        push(now_ + offset, Fire{b.id, b.service, b.provider, e.episode});
      }
    }
  }

  void handle(Fire& f) {
    Node& client = node(f.client);
    const ConversationId conv = factory_.open_conversation();
    Message m = factory_.make(Performative::RequestService, f.client, f.provider, conv, f.service,
                              ServiceArguments{});
    if (f.client == scenario_.run.top_level_client) top_requests_[to_int(m.id)] = f.episode;
    client.agent.on_request_sent(m);
    send(m);
  }

  void handle(Deliver& d) {
    Node& r = node(d.receiver);
    const Message& m = d.message;
    switch (m.performative) {
      case Performative::RequestService:
        if (r.spec == nullptr || r.spec->service(*m.service) == nullptr) {
          annotate(r.agent.id() + " refuses unknown service '" + *m.service + "'");
          audit_.violations.push_back("request " + std::to_string(to_int(m.id)) +
                                      " for a service its receiver does not offer");
          return;
        }
        r.agent.on_request_received(m);
        r.queue.push_back(m);
        try_start(r);
        return;
      case Performative::InformService:
        on_service_reply(r, m);
        return;
      case Performative::InformAbnormality:
        try {
          r.agent.on_abnormality(r.port, m);
        } catch (const DiagnosisError& e) {
          annotate(std::string("diagnosis aborted: ") + e.what());
        }
        return;
      case Performative::InformNormality:
        r.agent.on_normality(r.port, m);
        return;
      case Performative::RequestProbability:
        r.agent.on_probability_request(r.port, m);
        return;
      case Performative::InformProbability:
      case Performative::RefuseProbability:
        probe_deliveries_[to_int(m.conversation)].push_back({now_, m.sender});
        r.agent.on_probe_reply(r.port, m);
        return;
    }
  }

  void handle(Complete& c) {
    Node& n = node(c.agent);
    Job job = std::move(*n.job);
    n.job.reset();
    const ServiceSpec* svc = n.spec->service(*job.request.service);
    const double cost = svc->cost + job.sub_cost;
    send(factory_.make(Performative::InformService, n.agent.id(), job.request.sender,
                       job.request.conversation, job.request.service,
                       ServiceOutput{job.request.id, cost}));
    try_start(n);
  }

  void handle(TimerFire& t) { node(t.agent).agent.on_timer(node(t.agent).port, t.key); }

  // Service execution -----------------------------------------------------

  void try_start(Node& n) {
    if (n.job || n.queue.empty()) return;
    n.job = Job{n.queue.front(), {}, 0.0};
    n.queue.pop_front();
    for (const ServiceId& s : n.binding_order) {
      const AgentId provider = n.bindings.at(s).provider();
      Message sub = factory_.make(Performative::RequestService, n.agent.id(), provider,
                                  n.job->request.conversation, s, ServiceArguments{});
      n.job->pending.insert(to_int(sub.id));
      n.agent.on_request_sent(sub);
      send(sub);
    }
    if (n.job->pending.empty()) schedule_completion(n);
  }

  void schedule_completion(Node& n) {
    const ServiceSpec* svc = n.spec->service(*n.job->request.service);
    double t = svc->processing_ms + svc->jitter_ms * detail::unit_draw(rng_);
    for (const FailureState& f : failures_) {
      if (f.provider_active && f.spec->target == n.agent.id()) t += f.spec->penalty_ms;
    }
    push(now_ + t, Complete{n.agent.id()});
  }

  void on_service_reply(Node& client, const Message& reply) {
    const auto& output = std::get<ServiceOutput>(reply.payload);
    const std::uint64_t request_id = to_int(output.reply_to);
    auto sent = sent_at_.find(request_id);
    if (sent == sent_at_.end()) throw SimulationError("reply to unknown request " + serialize(reply));
    Measurements measured{{kResponseTime, now_ - sent->second}, {kCost, output.cost}};
    client.agent.on_service_reply(client.port, reply, measured);

    auto top = top_requests_.find(request_id);
    if (top != top_requests_.end()) {
      EpisodeData& ep = episodes_data_[top->second];
      ep.response_time = measured[kResponseTime];
      ep.cost = output.cost;
      for (const auto& [feature, constraint] : client.agent.requirements()) {
        if (!constraint.evaluate(measured)) ep.violation = true;
      }
      return;
    }
    if (client.job && client.job->pending.erase(request_id) > 0) {
      client.job->sub_cost += output.cost;
      if (client.job->pending.empty()) schedule_completion(client);
    }
  }

  // Transport ---------------------------------------------------------------

  [[nodiscard]] double link_latency(const AgentId& a, const AgentId& b) const {
    double latency = 0.0;
    for (const FailureState& f : failures_) {
      if (!f.link_active) continue;
      const auto& [x, y] = *f.spec->link;
      if ((x == a && y == b) || (x == b && y == a)) latency += f.spec->penalty_ms;
    }
    return latency;
  }

  void send(const Message& m) {
    check_message(m);
    ++messages_;
    if (options_.keep_log) log_.push_back(serialize(m));
    messages_log_.push_back(m);
    if (m.performative == Performative::RequestService) sent_at_[to_int(m.id)] = now_;
    if (m.performative == Performative::RequestProbability) {
      probe_opened_[to_int(m.conversation)] = {m.sender, now_};
    }
    if (m.receiver) {
      push(now_ + link_latency(m.sender, *m.receiver), Deliver{m, *m.receiver});
      return;
    }
    for (const auto& [id, n] : nodes_) {
      if (id == m.sender) continue;
      push(now_ + link_latency(m.sender, id), Deliver{m, id});
    }
  }

  // Remediation -------------------------------------------------------------

  bool self_healing(Node& n) {
    bool cleared = false;
    for (FailureState& f : failures_) {
      if (f.provider_active && f.spec->target == n.agent.id()) {
        f.provider_active = false;
        cleared = true;
        annotate(n.agent.id() + " self-heals: provider part of " + f.spec->id + " cleared");
      }
    }
    if (!cleared) annotate("warning: " + n.agent.id() + " self-heals with no active provider failure");
    return cleared;
  }

  bool repair_link(Node& n, const AgentId& p) {
    bool cleared = false;
    for (FailureState& f : failures_) {
      if (!f.link_active) continue;
      const auto& [x, y] = *f.spec->link;
      if ((x == n.agent.id() && y == p) || (x == p && y == n.agent.id())) {
        f.link_active = false;
        cleared = true;
        annotate(n.agent.id() + " repairs link to " + p + ": link part of " + f.spec->id + " cleared");
      }
    }
    if (!cleared) annotate("warning: " + n.agent.id() + " repairs link to " + p + " with no active failure");
    return cleared;
  }

  bool mitigate(Node& n, const ServiceId& s) {
    auto it = n.bindings.find(s);
    if (it == n.bindings.end() || it->second.current + 1 >= it->second.candidates.size()) {
      annotate(n.agent.id() + " has no alternate left for service '" + s + "'");
      return false;
    }
    Binding& b = it->second;
    b.undo_stack.push_back(b.current);
    const AgentId from = b.provider();
    ++b.current;
    ++audit_.mitigations;
    annotate(n.agent.id() + " mitigates '" + s + "': " + from + " -> " + b.provider());
    return true;
  }

  bool undo(Node& n, const ServiceId& s) {
    auto it = n.bindings.find(s);
    if (it == n.bindings.end() || it->second.undo_stack.empty()) return false;
    Binding& b = it->second;
    const AgentId from = b.provider();
    b.current = b.undo_stack.back();
    b.undo_stack.pop_back();
    ++audit_.undos;
    annotate(n.agent.id() + " undoes mitigation of '" + s + "': " + from + " -> " + b.provider());
    return true;
  }

  // Results -----------------------------------------------------------------

  void snapshot_failures(int episode) {
    std::vector<std::string> active;
    for (const FailureState& f : failures_) {
      if (f.active()) active.push_back(f.spec->id);
    }
    episodes_data_[episode].active_failures = std::move(active);
  }

  RunResult finish() {
    RunResult result;
    for (int k = 1; k <= episodes_; ++k) {
      const EpisodeData& ep = episodes_data_[k];
      if (!ep.response_time) {
        throw SimulationError("episode " + std::to_string(k) + " has no top-level reply");
      }
      MetricsRecord r{k, options_.strategy, *ep.response_time, *ep.cost, ep.violation,
                      ep.active_failures};
      result.summary.accumulated_cost += r.cost;
      result.summary.violations += r.violation ? 1 : 0;
      result.records.push_back(std::move(r));
    }
    for (const FailureState& f : failures_) {
      if (f.active()) result.summary.final_active_failures.push_back(f.spec->id);
    }
    std::vector<int> starts;
    if (options_.phase_starts) {
      starts = *options_.phase_starts;
    } else {
      for (const FailureState& f : failures_) starts.push_back(f.spec->onset_episode);
    }
    result.summary.phases = phase_statistics(result.records, starts, episodes_);
    result.summary.messages = messages_;
    result.summary.events = processed_;
    for (const auto& [id, n] : nodes_) {
      const auto& outcomes = n->agent.outcomes();
      result.diagnoses.insert(result.diagnoses.end(), outcomes.begin(), outcomes.end());
    }
    run_audit();
    result.audit = audit_;
    result.log = std::move(log_);
    return result;
  }

  void run_audit() {
    std::vector<std::string>& v = audit_.violations;
    // Request/reply pairing.
    std::map<std::uint64_t, const Message*> requests;
    std::map<std::uint64_t, int> replies;
    for (const Message& m : messages_log_) {
      if (m.performative == Performative::RequestService) requests.emplace(to_int(m.id), &m);
    }
    audit_.service_requests = requests.size();
    for (const Message& m : messages_log_) {
      if (m.performative != Performative::InformService) continue;
      const auto reply_to = to_int(std::get<ServiceOutput>(m.payload).reply_to);
      auto it = requests.find(reply_to);
      if (it == requests.end() || !validate_reply(*it->second, m)) {
        v.push_back("inform-service " + std::to_string(to_int(m.id)) + " matches no request");
        continue;
      }
      ++replies[reply_to];
    }
    for (const auto& [id, m] : requests) {
      if (replies[id] != 1) {
        v.push_back("request-service " + std::to_string(id) + " got " + std::to_string(replies[id]) +
                    " replies");
      }
    }
    // Every inform-normality answers an earlier inform-abnormality.
    std::map<std::tuple<std::uint64_t, AgentId, AgentId>, long> open_notices;
    for (const Message& m : messages_log_) {
      if (m.performative == Performative::InformAbnormality) {
        ++open_notices[{to_int(m.conversation), m.sender, *m.receiver}];
      } else if (m.performative == Performative::InformNormality) {
        long& open = open_notices[{to_int(m.conversation), *m.receiver, m.sender}];
        if (open <= 0) {
          v.push_back("inform-normality " + std::to_string(to_int(m.id)) +
                      " has no preceding inform-abnormality");
        } else {
          --open;
        }
      }
    }
    // Counted probe replies all arrived before the probe closed.
    audit_.probes = probe_opened_.size();
    for (const auto& [conv, opened] : probe_opened_) {
      const auto& [initiator, at] = opened;
      const ConversationState* state = node(initiator).agent.probe_state(ConversationId{conv});
      if (state == nullptr) {
        v.push_back("probe " + std::to_string(conv) + " has no state at its initiator");
        continue;
      }
      std::size_t admissible = 0;
      std::size_t total = 0;
      const double deadline = at + scenario_.run.probe_deadline_ms;
      for (const ProbeDelivery& d : probe_deliveries_[conv]) {
        ++total;
        const bool quota_met = scenario_.run.probe_quota && admissible >= *scenario_.run.probe_quota;
        if (d.time < deadline && !quota_met) ++admissible;
      }
      if (state->replies() != admissible || state->discarded != total - admissible) {
        v.push_back("probe " + std::to_string(conv) + " counted " + std::to_string(state->replies()) +
                    " replies, expected " + std::to_string(admissible));
      }
    }
    // Cooperative diagnoses revert what they mitigated once the cause is solved.
    if (options_.strategy == Strategy::Cooperative) {
      for (const auto& [id, n] : nodes_) {
        for (const DiagnosisOutcome& o : n->agent.outcomes()) {
          if (!o.finished) {
            v.push_back("diagnosis " + std::to_string(o.id) + " of " + o.agent + " never finished");
          }
          for (const Finding& f : o.findings) {
            if (f.mitigated && f.resolved && !f.undone) {
              v.push_back("diagnosis " + std::to_string(o.id) + " of " + o.agent +
                          " kept a mitigation after the cause was solved");
            }
          }
        }
      }
    }
  }

  const Scenario& scenario_;
  RunOptions options_;
  Topology topology_;
  std::mt19937_64 rng_;
  int episodes_;
  MessageFactory factory_;
  std::map<AgentId, std::unique_ptr<Node>> nodes_;
  std::vector<FailureState> failures_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t next_seq_ = 0;
  std::size_t processed_ = 0;
  std::size_t messages_ = 0;
  double now_ = 0.0;
  int current_episode_ = 0;
  std::map<std::uint64_t, double> sent_at_;
  std::map<std::uint64_t, int> top_requests_;
  std::map<int, EpisodeData> episodes_data_;
  std::map<std::uint64_t, std::pair<AgentId, double>> probe_opened_;
  std::map<std::uint64_t, std::vector<ProbeDelivery>> probe_deliveries_;
  std::vector<Message> messages_log_;
  std::vector<std::string> log_;
  AuditReport audit_;
};

inline RunResult run_simulation(const Scenario& scenario, const RunOptions& options) {
  return Simulation(scenario, options).run();
}

}  // namespace coopdiag
