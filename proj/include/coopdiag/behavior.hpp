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
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coopdiag/constraint.hpp"
#include "coopdiag/message.hpp"
#include "coopdiag/protocol.hpp"
#include "coopdiag/stats.hpp"
#include "coopdiag/trace_store.hpp"

namespace coopdiag {

enum class Strategy { Passive, Remedial, Cooperative };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Passive: return "passive";
    case Strategy::Remedial: return "remedial";
    case Strategy::Cooperative: return "cooperative";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view text) {
  if (text == "passive") return Strategy::Passive;
  if (text == "remedial") return Strategy::Remedial;
  if (text == "cooperative") return Strategy::Cooperative;
  return std::nullopt;
}

class DiagnosisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <s, p, id_m> of a sub-service consumption whose measurement was an outlier.
struct AnomalousInteraction {
  ServiceId service;
  AgentId provider;
  MessageId message{};
  friend bool operator==(const AnomalousInteraction&, const AnomalousInteraction&) = default;
};

struct ProbeReply {
  AgentId sender;
  double probability = 0.0;
};

/// Domain-specific repair actions. Each returns whether it changed anything.
class RemediationHooks {
 public:
  virtual ~RemediationHooks() = default;
  virtual bool self_healing() = 0;
  virtual bool mitigate(const ServiceId& service) = 0;
  virtual bool repair_link(const AgentId& provider) = 0;
  /// Reverts the mitigation last applied to service.
  virtual bool undo(const ServiceId& service) = 0;
};

/// 1/d for hop distance d, 1 for the agent itself, 0 when unreachable.
inline double similarity_index(std::optional<std::size_t> hops) {
  if (!hops) return 0.0;
  if (*hops == 0) return 1.0;
  return 1.0 / static_cast<double>(*hops);
}

/// Similarity-weighted mean of the reported probabilities; 0 without evidence.
inline double external_score(std::span<const ProbeReply> replies,
                             const std::function<double(const AgentId&)>& similarity) {
  std::vector<double> index;
  index.reserve(replies.size());
  double total = 0.0;
  for (const ProbeReply& r : replies) {
    index.push_back(similarity(r.sender));
    total += index.back();
  }
  if (!(total > 0.0)) return 0.0;
  double score = 0.0;
  for (std::size_t i = 0; i < replies.size(); ++i) score += replies[i].probability * (index[i] / total);
  return score;
}

/// Interactions of a conversation whose measurement of q is an outlier with
/// respect to everything recorded up to it for the same service and provider.
inline std::vector<AnomalousInteraction> find_anomalous_interactions(const TraceStore& traces,
                                                                     const FeatureName& q,
                                                                     ConversationId conversation) {
  std::vector<AnomalousInteraction> out;
  for (const InteractionTrace& t : traces.get_traces(conversation)) {
    const auto history = traces.get_measurements(t.service(), t.provider(), q, *t.time);
    if (!history.empty() && stats::is_anomalous(history)) {
      out.push_back({t.service(), t.provider(), t.request.id});
    }
  }
  return out;
}

enum class Cause { Internal, External, Link, Provider };

inline std::string_view to_string(Cause c) {
  switch (c) {
    case Cause::Internal: return "internal";
    case Cause::External: return "external";
    case Cause::Link: return "link";
    case Cause::Provider: return "provider";
  }
  return "?";
}

struct Finding {
  Cause cause = Cause::Internal;
  std::optional<AnomalousInteraction> interaction;
  std::optional<double> score;
  bool mitigated = false;
  bool undone = false;
  // False when the suspect never confirmed normality before the give-up timeout.
  bool resolved = true;
};

struct DiagnosisOutcome {
  std::uint64_t id = 0;
  AgentId agent;
  ConversationId conversation{};
  FeatureName feature;
  std::vector<Finding> findings;
  bool finished = false;
};

struct DiagnosisConfig {
  double threshold = 0.5;
  double probe_deadline_ms = 5000.0;
  std::optional<std::size_t> probe_quota;
  double give_up_ms = 50000.0;
  stats::ProbabilityOptions probability;
};

enum class TimerKind { ProbeDeadline, SuspectGiveUp };

struct TimerKey {
  TimerKind kind = TimerKind::ProbeDeadline;
  std::uint64_t diagnosis = 0;
};

/// What an agent's role logic needs from its environment.
class AgentPort {
 public:
  virtual ~AgentPort() = default;
  [[nodiscard]] virtual double now() const = 0;
  virtual MessageFactory& messages() = 0;
  virtual void send(const Message& m) = 0;
  virtual void schedule(double at, const TimerKey& key) = 0;
  /// Similarity index between this agent and another.
  [[nodiscard]] virtual double similarity(const AgentId& other) const = 0;
  virtual RemediationHooks& hooks() = 0;
  virtual void annotate(const std::string& text) = 0;
};

/// Client, provider and cooperating-agent behaviour of one agent.
class Agent {
 public:
  Agent(AgentId id, Strategy strategy, QualityRequirement requirements = {},
        DiagnosisConfig config = {})
      : id_(std::move(id)),
        strategy_(strategy),
        requirements_(std::move(requirements)),
        config_(config) {}

  [[nodiscard]] const AgentId& id() const { return id_; }
  [[nodiscard]] Strategy strategy() const { return strategy_; }
  [[nodiscard]] const TraceStore& traces() const { return traces_; }
  [[nodiscard]] const QualityRequirement& requirements() const { return requirements_; }
  [[nodiscard]] const DiagnosisConfig& config() const { return config_; }
  [[nodiscard]] const std::vector<DiagnosisOutcome>& outcomes() const { return outcomes_; }

  [[nodiscard]] std::size_t active_diagnoses() const {
    std::size_t n = 0;
    for (const auto& [id, d] : diagnoses_) n += d.stage != Stage::Finished;
    return n;
  }

  // Client role ------------------------------------------------------------

  void on_request_sent(const Message& m) {
    traces_.create_trace(m);
    service_states_.emplace(to_int(m.id), ConversationState::service(m.conversation, id_));
  }

  /// Completes the trace and notifies the provider of every violated
  /// requirement. Returns the notifications sent.
  std::vector<Message> on_service_reply(AgentPort& port, const Message& reply,
                                        const Measurements& measured) {
    const auto* output = std::get_if<ServiceOutput>(&reply.payload);
    if (reply.performative != Performative::InformService || output == nullptr) {
      throw ProtocolError("on_service_reply expects inform-service");
    }
    const InteractionTrace* trace = traces_.find(reply.conversation, output->reply_to);
    if (trace == nullptr || trace->completed() || !validate_reply(trace->request, reply)) {
      throw ProtocolError(id_ + ": unmatched inform-service " + serialize(reply));
    }
    auto state = service_states_.find(to_int(output->reply_to));
    state->second = advance(state->second, Direction::Received, reply, port.now());
    traces_.update_trace(reply.conversation, output->reply_to, measured, port.now());

    std::vector<Message> sent;
    for (const auto& [feature, constraint] : requirements_) {
      if (constraint.evaluate(measured)) continue;
      Message notice = port.messages().make(
          Performative::InformAbnormality, id_, reply.sender, reply.conversation, std::nullopt,
          AbnormalityNotice{feature, reply.conversation, std::nullopt});
      note_notice_sent(port, notice);
      port.send(notice);
      sent.push_back(std::move(notice));
    }
    return sent;
  }

  // Provider role ----------------------------------------------------------

  /// Records that this agent served a request in the given conversation.
  void on_request_received(const Message& m) { served_.insert(to_int(m.conversation)); }

  /// Strategy dispatch for a received inform-abnormality.
  void on_abnormality(AgentPort& port, const Message& notice) {
    const auto* n = std::get_if<AbnormalityNotice>(&notice.payload);
    if (n == nullptr) throw ProtocolError("on_abnormality expects inform-abnormality");
    if (strategy_ == Strategy::Passive) {
      port.annotate(id_ + " ignores abnormality notice " + std::to_string(to_int(notice.id)));
      return;
    }
    internal_verification(port, n->feature, n->conversation, notice.sender);
  }

  /// Stepwise cause diagnosis for a violation of q perceived in a
  /// conversation. Returns the diagnosis id.
  std::uint64_t internal_verification(AgentPort& port, const FeatureName& q,
                                      ConversationId conversation, const AgentId& notifier) {
    if (!served_.contains(to_int(conversation))) {
      throw DiagnosisError(id_ + ": no service delivered in conversation " +
                           std::to_string(to_int(conversation)));
    }
    Diagnosis& d = start_diagnosis(q, conversation, notifier);
    d.interactions = find_anomalous_interactions(traces_, q, conversation);
    if (d.interactions.empty()) {
      if (traces_.get_traces(conversation).empty()) {
        port.annotate(id_ + " has no sub-service traces in conversation " +
                      std::to_string(to_int(conversation)) + "; treating cause as internal");
      }
      port.hooks().self_healing();
      send_normality(port, d);
      record(d).findings.push_back(Finding{Cause::Internal, std::nullopt, std::nullopt});
      finish(d);
      return d.id;
    }
    proceed(port, d);
    return d.id;
  }

  void on_normality(AgentPort& port, const Message& m) {
    auto state = notice_states_.find({to_int(m.conversation), m.sender});
    if (state == notice_states_.end()) {
      throw ProtocolError(id_ + ": inform-normality without a matching inform-abnormality");
    }
    state->second = advance(state->second, Direction::Received, m, port.now());
    auto waiting = awaiting_.find({to_int(m.conversation), m.sender});
    if (waiting == awaiting_.end() || waiting->second.empty()) return;
    const std::uint64_t did = waiting->second.front();
    waiting->second.pop_front();
    Diagnosis& d = diagnoses_.at(did);
    Finding f{Cause::Provider, current(d), d.score, d.mitigated_current};
    f.undone = d.mitigated_current && port.hooks().undo(current(d).service);
    record(d).findings.push_back(f);
    ++d.cursor;
    proceed(port, d);
  }

  // Cooperating role -------------------------------------------------------

  /// Answers a probe with the anomaly probability of the suspect, or refuses
  /// when this agent never consumed the service from it.
  Message on_probability_request(AgentPort& port, const Message& request) {
    const auto* query = std::get_if<ProbabilityQuery>(&request.payload);
    if (query == nullptr) throw ProtocolError("on_probability_request expects request-probability");
    std::optional<double> prob;
    if (query->suspect != id_ && request.sender != id_) {
      prob = compute_probability(query->service, query->suspect, query->feature, port.now());
    }
    Message reply =
        prob ? port.messages().make(Performative::InformProbability, id_, request.sender,
                                    request.conversation, query->service, ProbabilityAnswer{*prob})
             : port.messages().make(Performative::RefuseProbability, id_, request.sender,
                                    request.conversation, query->service, ProbabilityRefusal{});
    port.send(reply);
    return reply;
  }

  [[nodiscard]] std::optional<double> compute_probability(const ServiceId& s, const AgentId& p,
                                                          const FeatureName& q, double now) const {
    auto [values, times] = traces_.history(s, p, q, now);
    if (values.empty()) return std::nullopt;
    return stats::anomaly_probability(stats::Sample(std::move(values), std::move(times)),
                                      config_.probability);
  }

  void on_probe_reply(AgentPort& port, const Message& reply) {
    auto it = probes_.find(to_int(reply.conversation));
    if (it == probes_.end()) {
      throw ProtocolError(id_ + ": probe reply for unknown conversation " +
                          std::to_string(to_int(reply.conversation)));
    }
    Diagnosis& d = diagnoses_.at(it->second);
    ConversationState& probe = probe_states_.at(to_int(reply.conversation));
    const bool was_open = probe.phase == Phase::ProbeCollecting;
    probe = advance(probe, Direction::Received, reply, port.now());
    if (!was_open) {
      port.annotate(id_ + " discards late probe reply " + std::to_string(to_int(reply.id)));
      return;
    }
    if (probe.phase == Phase::ProbeClosed && d.stage == Stage::Probing &&
        d.probe == reply.conversation) {
      conclude_probe(port, d);
    }
  }

  void on_timer(AgentPort& port, const TimerKey& key) {
    auto it = diagnoses_.find(key.diagnosis);
    if (it == diagnoses_.end()) return;
    Diagnosis& d = it->second;
    if (key.kind == TimerKind::ProbeDeadline) {
      if (d.stage != Stage::Probing) return;
      ConversationState& probe = probe_states_.at(to_int(d.probe));
      probe = expire(probe, port.now());
      if (probe.phase == Phase::ProbeClosed) conclude_probe(port, d);
      return;
    }
    if (d.stage != Stage::AwaitingSuspect) return;
    auto& queue = awaiting_[{to_int(d.conversation), current(d).provider}];
    std::erase(queue, d.id);
    port.annotate(id_ + " gives up waiting for " + current(d).provider + "; mitigation kept");
    Finding f{Cause::Provider, current(d), d.score, d.mitigated_current};
    f.resolved = false;
    record(d).findings.push_back(f);
    ++d.cursor;
    proceed(port, d);
  }

  [[nodiscard]] const ConversationState* probe_state(ConversationId probe) const {
    auto it = probe_states_.find(to_int(probe));
    return it == probe_states_.end() ? nullptr : &it->second;
  }

 private:
  enum class Stage { Running, Probing, AwaitingSuspect, Finished };

  struct Diagnosis {
    std::uint64_t id = 0;
    FeatureName feature;
    ConversationId conversation{};
    AgentId notifier;
    std::vector<AnomalousInteraction> interactions;
    std::size_t cursor = 0;
    bool normality_sent = false;
    bool mitigated_current = false;
    ConversationId probe{};
    std::optional<double> score;
    Stage stage = Stage::Running;
    std::size_t outcome_index = 0;
  };

  Diagnosis& start_diagnosis(const FeatureName& q, ConversationId conversation,
                             const AgentId& notifier) {
    const std::uint64_t did = next_diagnosis_++;
    Diagnosis d;
    d.id = did;
    d.feature = q;
    d.conversation = conversation;
    d.notifier = notifier;
    d.outcome_index = outcomes_.size();
    outcomes_.push_back(DiagnosisOutcome{did, id_, conversation, q, {}, false});
    return diagnoses_.emplace(did, std::move(d)).first->second;
  }

  DiagnosisOutcome& record(const Diagnosis& d) { return outcomes_[d.outcome_index]; }

  static const AnomalousInteraction& current(const Diagnosis& d) { return d.interactions[d.cursor]; }

  void finish(Diagnosis& d) {
    d.stage = Stage::Finished;
    record(d).finished = true;
  }

  void send_normality(AgentPort& port, Diagnosis& d) {
    if (d.normality_sent) return;
    d.normality_sent = true;
    port.send(port.messages().make(Performative::InformNormality, id_, d.notifier, d.conversation,
                                   std::nullopt, NormalityNotice{}));
  }

  void note_notice_sent(AgentPort& port, const Message& notice) {
    const auto key = std::make_pair(to_int(notice.conversation), *notice.receiver);
    auto it = notice_states_.find(key);
    if (it == notice_states_.end()) {
      ConversationState s = ConversationState::service(notice.conversation, id_);
      s.phase = Phase::ServiceDone;
      it = notice_states_.emplace(key, s).first;
    }
    it->second = advance(it->second, Direction::Sent, notice, port.now());
  }

  // Walks the anomalous interactions: mitigate, tell the notifier once, then
  // verify externally (cooperative) or move on (remedial).
  void proceed(AgentPort& port, Diagnosis& d) {
    d.stage = Stage::Running;
    while (d.cursor < d.interactions.size()) {
      const AnomalousInteraction& ia = current(d);
      d.mitigated_current = port.hooks().mitigate(ia.service);
      d.score.reset();
      send_normality(port, d);
      if (strategy_ != Strategy::Cooperative) {
        record(d).findings.push_back(Finding{Cause::External, ia, std::nullopt, d.mitigated_current});
        ++d.cursor;
        continue;
      }
      open_probe(port, d);
      return;
    }
    finish(d);
  }

  void open_probe(AgentPort& port, Diagnosis& d) {
    const AnomalousInteraction& ia = current(d);
    d.probe = port.messages().open_conversation();
    std::optional<double> deadline;
    if (config_.probe_deadline_ms > 0.0) deadline = port.now() + config_.probe_deadline_ms;
    probe_states_.emplace(to_int(d.probe),
                          ConversationState::probe(d.probe, id_, deadline, config_.probe_quota));
    probes_.emplace(to_int(d.probe), d.id);
    d.stage = Stage::Probing;
    if (deadline) port.schedule(*deadline, TimerKey{TimerKind::ProbeDeadline, d.id});
    port.send(port.messages().make(Performative::RequestProbability, id_, std::nullopt, d.probe,
                                   ia.service, ProbabilityQuery{ia.provider, ia.service, d.feature}));
  }

  void conclude_probe(AgentPort& port, Diagnosis& d) {
    const ConversationState& probe = probe_states_.at(to_int(d.probe));
    std::vector<ProbeReply> replies;
    for (const auto& a : probe.answers) replies.push_back({a.sender, a.probability});
    const double score =
        external_score(replies, [&port](const AgentId& other) { return port.similarity(other); });
    d.score = score;
    const AnomalousInteraction& ia = current(d);
    if (score <= config_.threshold) {
      port.hooks().repair_link(ia.provider);
      Finding f{Cause::Link, ia, score, d.mitigated_current};
      f.undone = d.mitigated_current && port.hooks().undo(ia.service);
      record(d).findings.push_back(f);
      ++d.cursor;
      proceed(port, d);
      return;
    }
    Message notice = port.messages().make(Performative::InformAbnormality, id_, ia.provider,
                                          d.conversation, std::nullopt,
                                          AbnormalityNotice{d.feature, d.conversation, ia.message});
    note_notice_sent(port, notice);
    awaiting_[{to_int(d.conversation), ia.provider}].push_back(d.id);
    d.stage = Stage::AwaitingSuspect;
    port.schedule(port.now() + config_.give_up_ms, TimerKey{TimerKind::SuspectGiveUp, d.id});
    port.send(notice);
  }

  AgentId id_;
  Strategy strategy_;
  QualityRequirement requirements_;
  DiagnosisConfig config_;
  TraceStore traces_;
  std::set<std::uint64_t> served_;
  std::map<std::uint64_t, ConversationState> service_states_;
  std::map<std::pair<std::uint64_t, AgentId>, ConversationState> notice_states_;
  std::map<std::uint64_t, ConversationState> probe_states_;
  std::map<std::uint64_t, std::uint64_t> probes_;
  std::map<std::pair<std::uint64_t, AgentId>, std::deque<std::uint64_t>> awaiting_;
  std::map<std::uint64_t, Diagnosis> diagnoses_;
  std::vector<DiagnosisOutcome> outcomes_;
  std::uint64_t next_diagnosis_ = 1;
};

}  // namespace coopdiag
