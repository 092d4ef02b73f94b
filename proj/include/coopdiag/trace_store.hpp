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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coopdiag/message.hpp"

namespace coopdiag {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <m, M_q, time>: a traced service request. Pending until the reply arrives.
struct InteractionTrace {
  Message request;
  std::optional<Measurements> measurements;
  std::optional<double> time;

  [[nodiscard]] bool completed() const { return time.has_value(); }
  [[nodiscard]] const ServiceId& service() const { return *request.service; }
  [[nodiscard]] const AgentId& provider() const { return *request.receiver; }
};

/// The interaction traces collected by one agent, in record order.
class TraceStore {
 public:
  const InteractionTrace& create_trace(const Message& m) {
    if (m.performative != Performative::RequestService || !m.service || !m.receiver) {
      throw TraceError("only directed request-service messages are traced");
    }
    const Key key{to_int(m.conversation), to_int(m.id)};
    if (by_ids_.contains(key)) {
      throw TraceError("trace already exists for conversation " +
                       std::to_string(to_int(m.conversation)) + ", message " +
                       std::to_string(to_int(m.id)));
    }
    const std::size_t index = traces_.size();
    traces_.push_back(InteractionTrace{m, std::nullopt, std::nullopt});
    by_ids_.emplace(key, index);
    by_conversation_[to_int(m.conversation)].push_back(index);
    by_channel_[{*m.service, *m.receiver}].push_back(index);
    return traces_.back();
  }

  const InteractionTrace& update_trace(ConversationId conversation, MessageId message,
                                       Measurements measurements, double time) {
    auto it = by_ids_.find({to_int(conversation), to_int(message)});
    if (it == by_ids_.end()) {
      throw TraceError("no pending trace for conversation " + std::to_string(to_int(conversation)) +
                       ", message " + std::to_string(to_int(message)));
    }
    InteractionTrace& trace = traces_[it->second];
    if (trace.completed()) {
      throw TraceError("trace for message " + std::to_string(to_int(message)) +
                       " is already completed");
    }
    if (time < 0.0) {
      throw TraceError("trace time must be nonnegative");
    }
    trace.measurements = std::move(measurements);
    trace.time = time;
    return trace;
  }

  [[nodiscard]] const InteractionTrace* find(ConversationId conversation, MessageId message) const {
    auto it = by_ids_.find({to_int(conversation), to_int(message)});
    return it == by_ids_.end() ? nullptr : &traces_[it->second];
  }

  /// Completed traces recorded during a conversation.
  [[nodiscard]] std::vector<InteractionTrace> get_traces(ConversationId conversation) const {
    std::vector<InteractionTrace> out;
    auto it = by_conversation_.find(to_int(conversation));
    if (it == by_conversation_.end()) return out;
    for (std::size_t i : it->second) {
      if (traces_[i].completed()) out.push_back(traces_[i]);
    }
    return out;
  }

  /// Values of feature q from service s delivered by p, recorded at or before
  /// cutoff, ordered by record time.
  [[nodiscard]] std::vector<double> get_measurements(const ServiceId& s, const AgentId& p,
                                                     const FeatureName& q, double cutoff) const {
    std::vector<double> out;
    for (const InteractionTrace* t : channel(s, p, cutoff)) {
      auto m = t->measurements->find(q);
      if (m != t->measurements->end()) out.push_back(m->second);
    }
    return out;
  }

  [[nodiscard]] std::vector<double> get_times(const ServiceId& s, const AgentId& p,
                                              double cutoff) const {
    std::vector<double> out;
    for (const InteractionTrace* t : channel(s, p, cutoff)) out.push_back(*t->time);
    return out;
  }

  /// Aligned measurements and times; traces lacking q are skipped in both.
  [[nodiscard]] std::pair<std::vector<double>, std::vector<double>> history(
      const ServiceId& s, const AgentId& p, const FeatureName& q, double cutoff) const {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const InteractionTrace* t : channel(s, p, cutoff)) {
      auto m = t->measurements->find(q);
      if (m == t->measurements->end()) continue;
      out.first.push_back(m->second);
      out.second.push_back(*t->time);
    }
    return out;
  }

  [[nodiscard]] const std::vector<InteractionTrace>& traces() const { return traces_; }
  [[nodiscard]] std::size_t size() const { return traces_.size(); }

 private:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  [[nodiscard]] std::vector<const InteractionTrace*> channel(const ServiceId& s, const AgentId& p,
                                                            double cutoff) const {
    std::vector<const InteractionTrace*> out;
    auto it = by_channel_.find({s, p});
    if (it == by_channel_.end()) return out;
    for (std::size_t i : it->second) {
      const InteractionTrace& t = traces_[i];
      if (t.completed() && *t.time <= cutoff) out.push_back(&t);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const InteractionTrace* a, const InteractionTrace* b) { return *a->time < *b->time; });
    return out;
  }

  std::vector<InteractionTrace> traces_;
  std::map<Key, std::size_t> by_ids_;
  std::map<std::uint64_t, std::vector<std::size_t>> by_conversation_;
  std::map<std::pair<ServiceId, AgentId>, std::vector<std::size_t>> by_channel_;
};

// Free-function spellings of the store queries.
inline std::vector<InteractionTrace> get_traces(const TraceStore& store, ConversationId id) {
  return store.get_traces(id);
}
inline std::vector<double> get_measurements(const TraceStore& store, const ServiceId& s,
                                            const AgentId& p, const FeatureName& q, double time) {
  return store.get_measurements(s, p, q, time);
}
inline std::vector<double> get_times(const TraceStore& store, const ServiceId& s, const AgentId& p,
                                     double time) {
  return store.get_times(s, p, time);
}

}  // namespace coopdiag
