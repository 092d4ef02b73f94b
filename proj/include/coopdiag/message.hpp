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

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "coopdiag/ids.hpp"

namespace coopdiag {

enum class Performative {
  RequestService,
  InformService,
  InformAbnormality,
  InformNormality,
  RequestProbability,
  InformProbability,
  RefuseProbability,
};

enum class MessageType { Request, Inform, Refuse };

inline MessageType message_type(Performative p) {
  switch (p) {
    case Performative::RequestService:
    case Performative::RequestProbability:
      return MessageType::Request;
    case Performative::RefuseProbability:
      return MessageType::Refuse;
    default:
      return MessageType::Inform;
  }
}

inline std::string_view to_string(Performative p) {
  switch (p) {
    case Performative::RequestService: return "request-service";
    case Performative::InformService: return "inform-service";
    case Performative::InformAbnormality: return "inform-abnormality";
    case Performative::InformNormality: return "inform-normality";
    case Performative::RequestProbability: return "request-probability";
    case Performative::InformProbability: return "inform-probability";
    case Performative::RefuseProbability: return "refuse-probability";
  }
  return "?";
}

inline std::string_view to_string(MessageType t) {
  switch (t) {
    case MessageType::Request: return "request";
    case MessageType::Inform: return "inform";
    case MessageType::Refuse: return "refuse";
  }
  return "?";
}

struct ServiceArguments {
  std::string text;
  friend bool operator==(const ServiceArguments&, const ServiceArguments&) = default;
};

/// Output of a delivered service. The simulation reports the accumulated cost
/// of the served chain and the request being answered.
struct ServiceOutput {
  MessageId reply_to{};
  double cost = 0.0;
  friend bool operator==(const ServiceOutput&, const ServiceOutput&) = default;
};

/// Notice of a quality requirement violation. Clients identify the
/// conversation; providers notifying a suspect also name the request.
struct AbnormalityNotice {
  FeatureName feature;
  ConversationId conversation{};
  std::optional<MessageId> message;
  friend bool operator==(const AbnormalityNotice&, const AbnormalityNotice&) = default;
};

struct NormalityNotice {
  friend bool operator==(const NormalityNotice&, const NormalityNotice&) = default;
};

struct ProbabilityQuery {
  AgentId suspect;
  ServiceId service;
  FeatureName feature;
  friend bool operator==(const ProbabilityQuery&, const ProbabilityQuery&) = default;
};

struct ProbabilityAnswer {
  double probability = 0.0;
  friend bool operator==(const ProbabilityAnswer&, const ProbabilityAnswer&) = default;
};

struct ProbabilityRefusal {
  friend bool operator==(const ProbabilityRefusal&, const ProbabilityRefusal&) = default;
};

using Payload = std::variant<ServiceArguments, ServiceOutput, AbnormalityNotice, NormalityNotice,
                             ProbabilityQuery, ProbabilityAnswer, ProbabilityRefusal>;

/// <id_m, id_c, c_s, c_r, type, s, cont>. An absent receiver means broadcast.
struct Message {
  MessageId id{};
  ConversationId conversation{};
  AgentId sender;
  std::optional<AgentId> receiver;
  Performative performative = Performative::RequestService;
  std::optional<ServiceId> service;
  Payload payload;

  [[nodiscard]] MessageType type() const { return message_type(performative); }
  [[nodiscard]] bool broadcast() const { return !receiver.has_value(); }

  friend bool operator==(const Message&, const Message&) = default;
};

}  // namespace coopdiag
