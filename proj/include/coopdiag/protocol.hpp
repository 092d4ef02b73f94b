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
#include <vector>

#include "coopdiag/message.hpp"

namespace coopdiag {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool payload_matches(Performative p, const Payload& payload) {
  switch (p) {
    case Performative::RequestService: return std::holds_alternative<ServiceArguments>(payload);
    case Performative::InformService: return std::holds_alternative<ServiceOutput>(payload);
    case Performative::InformAbnormality: return std::holds_alternative<AbnormalityNotice>(payload);
    case Performative::InformNormality: return std::holds_alternative<NormalityNotice>(payload);
    case Performative::RequestProbability: return std::holds_alternative<ProbabilityQuery>(payload);
    case Performative::InformProbability: return std::holds_alternative<ProbabilityAnswer>(payload);
    case Performative::RefuseProbability: return std::holds_alternative<ProbabilityRefusal>(payload);
  }
  return false;
}

}  // namespace detail

/// Checks the well-formedness rules every message must satisfy.
inline void check_message(const Message& m) {
  if (!detail::payload_matches(m.performative, m.payload)) {
    throw ProtocolError("payload does not match performative " +
                        std::string(to_string(m.performative)));
  }
  if (m.sender.empty()) {
    throw ProtocolError("message without sender");
  }
  const bool needs_service = m.performative == Performative::RequestService ||
                             m.performative == Performative::InformService;
  if (needs_service && !m.service) {
    throw ProtocolError(std::string(to_string(m.performative)) + " requires a service");
  }
  if (m.broadcast() && m.performative != Performative::RequestProbability) {
    throw ProtocolError("only request-probability may be broadcast");
  }
  if (m.receiver && m.receiver->empty()) {
    throw ProtocolError("empty receiver id");
  }
  if (const auto* answer = std::get_if<ProbabilityAnswer>(&m.payload)) {
    if (!(answer->probability >= 0.0 && answer->probability <= 1.0)) {
      throw ProtocolError("probability outside [0, 1]");
    }
  }
  if (const auto* query = std::get_if<ProbabilityQuery>(&m.payload)) {
    if (query->suspect.empty() || query->service.empty() || query->feature.empty()) {
      throw ProtocolError("request-probability needs suspect, service and feature");
    }
  }
}

/// Mints system-wide unique message ids and conversation ids.
class MessageFactory {
 public:
  Message make(Performative performative, AgentId sender, std::optional<AgentId> receiver,
               ConversationId conversation, std::optional<ServiceId> service, Payload payload) {
    Message m{MessageId{next_message_}, conversation, std::move(sender), std::move(receiver),
              performative, std::move(service), std::move(payload)};
    check_message(m);
    ++next_message_;
    return m;
  }

  ConversationId open_conversation() { return ConversationId{next_conversation_++}; }

 private:
  std::uint64_t next_message_ = 1;
  std::uint64_t next_conversation_ = 1;
};

inline Message make_message(MessageFactory& factory, Performative performative, AgentId sender,
                            std::optional<AgentId> receiver, ConversationId conversation,
                            std::optional<ServiceId> service, Payload payload) {
  return factory.make(performative, std::move(sender), std::move(receiver), conversation,
                      std::move(service), std::move(payload));
}

/// True when reply is an admissible answer to request.
inline bool validate_reply(const Message& request, const Message& reply) {
  if (reply.conversation != request.conversation) return false;
  if (request.broadcast()) {
    if (reply.sender == request.sender) return false;
  } else if (reply.sender != *request.receiver) {
    return false;
  }
  if (reply.receiver != request.sender) return false;
  switch (request.performative) {
    case Performative::RequestService:
      return reply.performative == Performative::InformService && reply.service == request.service;
    case Performative::InformAbnormality:
      return reply.performative == Performative::InformNormality;
    case Performative::RequestProbability:
      return reply.performative == Performative::InformProbability ||
             reply.performative == Performative::RefuseProbability;
    default:
      return false;
  }
}

enum class Phase {
  ServicePending,
  ServiceDone,
  AbnormalityPending,
  NormalityReceived,
  ProbeCollecting,
  ProbeClosed,
};

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::ServicePending: return "ServicePending";
    case Phase::ServiceDone: return "ServiceDone";
    case Phase::AbnormalityPending: return "AbnormalityPending";
    case Phase::NormalityReceived: return "NormalityReceived";
    case Phase::ProbeCollecting: return "ProbeCollecting";
    case Phase::ProbeClosed: return "ProbeClosed";
  }
  return "?";
}

enum class Direction { Sent, Received };

struct ProbeAnswer {
  AgentId sender;
  double probability = 0.0;
};

/// One agent's view of a dialogue with one peer.
struct ConversationState {
  ConversationId id{};
  AgentId initiator;
  Phase phase = Phase::ServicePending;
  std::optional<double> deadline;
  std::optional<std::size_t> quota;
  std::size_t outstanding_notices = 0;
  std::vector<ProbeAnswer> answers;
  std::size_t refusals = 0;
  std::size_t discarded = 0;

  static ConversationState service(ConversationId id, AgentId initiator) {
    ConversationState s;
    s.id = id;
    s.initiator = std::move(initiator);
    s.phase = Phase::ServicePending;
    return s;
  }

  static ConversationState probe(ConversationId id, AgentId initiator, std::optional<double> deadline,
                                 std::optional<std::size_t> quota) {
    if (!deadline && !quota) {
      throw ProtocolError("a probe needs a deadline or a reply quota");
    }
    ConversationState s;
    s.id = id;
    s.initiator = std::move(initiator);
    s.phase = Phase::ProbeCollecting;
    s.deadline = deadline;
    s.quota = quota;
    return s;
  }

  [[nodiscard]] std::size_t replies() const { return answers.size() + refusals; }
};

namespace detail {

[[noreturn]] inline void illegal(const ConversationState& s, Direction d, Performative p) {
  throw ProtocolError("illegal transition: phase " + std::string(to_string(s.phase)) + " on " +
                      (d == Direction::Sent ? "sent " : "received ") + std::string(to_string(p)));
}

}  // namespace detail

/// Closes a collecting probe whose deadline has passed.
inline ConversationState expire(ConversationState state, double now) {
  if (state.phase == Phase::ProbeCollecting && state.deadline && *state.deadline <= now) {
    state.phase = Phase::ProbeClosed;
  }
  return state;
}

inline ConversationState advance(ConversationState state, Direction direction, const Message& event,
                                 double now) {
  if (event.conversation != state.id) {
    throw ProtocolError("message belongs to conversation " +
                        std::to_string(to_int(event.conversation)) + ", not " +
                        std::to_string(to_int(state.id)));
  }
  state = expire(std::move(state), now);
  const Performative p = event.performative;
  switch (state.phase) {
    case Phase::ServicePending:
      if (direction == Direction::Received && p == Performative::InformService) {
        state.phase = Phase::ServiceDone;
        return state;
      }
      break;
    case Phase::ServiceDone:
    case Phase::NormalityReceived:
      if (direction == Direction::Sent && p == Performative::InformAbnormality) {
        state.phase = Phase::AbnormalityPending;
        state.outstanding_notices = 1;
        return state;
      }
      break;
    case Phase::AbnormalityPending:
      if (direction == Direction::Sent && p == Performative::InformAbnormality) {
        ++state.outstanding_notices;
        return state;
      }
      if (direction == Direction::Received && p == Performative::InformNormality) {
        if (--state.outstanding_notices == 0) state.phase = Phase::NormalityReceived;
        return state;
      }
      break;
    case Phase::ProbeCollecting:
      if (direction == Direction::Received && p == Performative::InformProbability) {
        state.answers.push_back({event.sender, std::get<ProbabilityAnswer>(event.payload).probability});
      } else if (direction == Direction::Received && p == Performative::RefuseProbability) {
        ++state.refusals;
      } else {
        break;
      }
      if (state.quota && state.replies() >= *state.quota) state.phase = Phase::ProbeClosed;
      return state;
    case Phase::ProbeClosed:
      if (direction == Direction::Received && (p == Performative::InformProbability ||
                                               p == Performative::RefuseProbability)) {
        ++state.discarded;
        return state;
      }
      break;
  }
  detail::illegal(state, direction, p);
}

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

inline std::string payload_to_string(const Payload& payload) {
  struct Visitor {
    std::string operator()(const ServiceArguments& a) const { return "args=" + a.text; }
    std::string operator()(const ServiceOutput& o) const {
      return "reply_to=" + std::to_string(to_int(o.reply_to)) +
             ";cost=" + detail::format_number(o.cost);
    }
    std::string operator()(const AbnormalityNotice& n) const {
      std::string s = "feature=" + n.feature + ";conversation=" + std::to_string(to_int(n.conversation));
      if (n.message) s += ";message=" + std::to_string(to_int(*n.message));
      return s;
    }
    std::string operator()(const NormalityNotice&) const { return ""; }
    std::string operator()(const ProbabilityQuery& q) const {
      return "suspect=" + q.suspect + ";service=" + q.service + ";feature=" + q.feature;
    }
    std::string operator()(const ProbabilityAnswer& a) const {
      return "prob=" + detail::format_number(a.probability);
    }
    std::string operator()(const ProbabilityRefusal&) const { return ""; }
  };
  return std::visit(Visitor{}, payload);
}

/// id_m|id_c|sender|receiver|performative|service|payload; '*' marks a
/// broadcast receiver and '-' an absent service.
inline std::string serialize(const Message& m) {
  std::string line;
  line += std::to_string(to_int(m.id));
  line += '|';
  line += std::to_string(to_int(m.conversation));
  line += '|';
  line += m.sender;
  line += '|';
  line += m.receiver ? *m.receiver : std::string("*");
  line += '|';
  line += to_string(m.performative);
  line += '|';
  line += m.service ? *m.service : std::string("-");
  line += '|';
  line += payload_to_string(m.payload);
  return line;
}

}  // namespace coopdiag
