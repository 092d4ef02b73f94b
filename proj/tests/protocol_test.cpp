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

#include "coopdiag/protocol.hpp"

#include <gtest/gtest.h>

#include <set>

namespace coopdiag {
namespace {

class ProtocolTest : public ::testing::Test {
 protected:
  MessageFactory f;
  ConversationId conv = f.open_conversation();

  Message service_request() {
    return f.make(Performative::RequestService, "c", "p", conv, "s", ServiceArguments{});
  }
  Message service_reply(const Message& req) {
    return f.make(Performative::InformService, "p", "c", conv, "s", ServiceOutput{req.id, 1.0});
  }
};

TEST_F(ProtocolTest, PerformativeTypes) {
  EXPECT_EQ(message_type(Performative::RequestService), MessageType::Request);
  EXPECT_EQ(message_type(Performative::RequestProbability), MessageType::Request);
  EXPECT_EQ(message_type(Performative::InformNormality), MessageType::Inform);
  EXPECT_EQ(message_type(Performative::RefuseProbability), MessageType::Refuse);
}

TEST_F(ProtocolTest, FactoryMintsUniqueIds) {
  std::set<std::uint64_t> ids;
  for (int i = 0; i < 100; ++i) ids.insert(to_int(service_request().id));
  EXPECT_EQ(ids.size(), 100u);
  EXPECT_NE(to_int(f.open_conversation()), to_int(conv));
}

TEST_F(ProtocolTest, WellFormednessChecks) {
  EXPECT_THROW(f.make(Performative::RequestService, "c", "p", conv, "s", NormalityNotice{}),
               ProtocolError);
  EXPECT_THROW(f.make(Performative::RequestService, "", "p", conv, "s", ServiceArguments{}),
               ProtocolError);
  EXPECT_THROW(f.make(Performative::RequestService, "c", "p", conv, std::nullopt, ServiceArguments{}),
               ProtocolError);
  EXPECT_THROW(f.make(Performative::InformNormality, "c", std::nullopt, conv, std::nullopt,
                      NormalityNotice{}),
               ProtocolError);
  EXPECT_THROW(f.make(Performative::InformProbability, "c", "p", conv, "s", ProbabilityAnswer{1.5}),
               ProtocolError);
  EXPECT_THROW(f.make(Performative::RequestProbability, "c", std::nullopt, conv, "s",
                      ProbabilityQuery{"", "s", "q"}),
               ProtocolError);
  EXPECT_NO_THROW(f.make(Performative::RequestProbability, "c", std::nullopt, conv, "s",
                         ProbabilityQuery{"p", "s", "q"}));
}

TEST_F(ProtocolTest, FailedMakeDoesNotConsumeId) {
  const Message a = service_request();
  EXPECT_THROW(f.make(Performative::RequestService, "", "p", conv, "s", ServiceArguments{}),
               ProtocolError);
  const Message b = service_request();
  EXPECT_EQ(to_int(b.id), to_int(a.id) + 1);
}

TEST_F(ProtocolTest, ReplyValidation) {
  const Message req = service_request();
  EXPECT_TRUE(validate_reply(req, service_reply(req)));
  const Message wrong_sender =
      f.make(Performative::InformService, "x", "c", conv, "s", ServiceOutput{req.id, 1.0});
  EXPECT_FALSE(validate_reply(req, wrong_sender));
  const Message wrong_service =
      f.make(Performative::InformService, "p", "c", conv, "t", ServiceOutput{req.id, 1.0});
  EXPECT_FALSE(validate_reply(req, wrong_service));

  const ConversationId probe = f.open_conversation();
  const Message q = f.make(Performative::RequestProbability, "p", std::nullopt, probe, "s",
                           ProbabilityQuery{"x", "s", "q"});
  EXPECT_TRUE(validate_reply(q, f.make(Performative::RefuseProbability, "y", "p", probe, "s",
                                       ProbabilityRefusal{})));
  EXPECT_FALSE(validate_reply(q, f.make(Performative::InformProbability, "p", "p", probe, "s",
                                        ProbabilityAnswer{0.2})));
  EXPECT_FALSE(validate_reply(q, f.make(Performative::InformProbability, "y", "p", conv, "s",
                                        ProbabilityAnswer{0.2})));

  const Message notice = f.make(Performative::InformAbnormality, "c", "p", conv, std::nullopt,
                                AbnormalityNotice{"q", conv, std::nullopt});
  EXPECT_TRUE(validate_reply(notice, f.make(Performative::InformNormality, "p", "c", conv,
                                            std::nullopt, NormalityNotice{})));
}

TEST_F(ProtocolTest, ServiceDialogueTransitions) {
  const Message req = service_request();
  ConversationState s = ConversationState::service(conv, "c");
  s = advance(s, Direction::Received, service_reply(req), 1);
  EXPECT_EQ(s.phase, Phase::ServiceDone);
  const Message notice = f.make(Performative::InformAbnormality, "c", "p", conv, std::nullopt,
                                AbnormalityNotice{"q", conv, std::nullopt});
  s = advance(s, Direction::Sent, notice, 2);
  s = advance(s, Direction::Sent, notice, 2);
  EXPECT_EQ(s.phase, Phase::AbnormalityPending);
  EXPECT_EQ(s.outstanding_notices, 2u);
  const Message normal =
      f.make(Performative::InformNormality, "p", "c", conv, std::nullopt, NormalityNotice{});
  s = advance(s, Direction::Received, normal, 3);
  EXPECT_EQ(s.phase, Phase::AbnormalityPending);
  s = advance(s, Direction::Received, normal, 3);
  EXPECT_EQ(s.phase, Phase::NormalityReceived);
  EXPECT_THROW(advance(s, Direction::Received, normal, 4), ProtocolError);
}

TEST_F(ProtocolTest, IllegalTransitionsThrow) {
  ConversationState s = ConversationState::service(conv, "c");
  const Message normal =
      f.make(Performative::InformNormality, "p", "c", conv, std::nullopt, NormalityNotice{});
  EXPECT_THROW(advance(s, Direction::Received, normal, 0), ProtocolError);
  const ConversationId other = f.open_conversation();
  const Message stray =
      f.make(Performative::InformService, "p", "c", other, "s", ServiceOutput{MessageId{1}, 0});
  EXPECT_THROW(advance(s, Direction::Received, stray, 0), ProtocolError);
}

TEST_F(ProtocolTest, ProbeClosesAtDeadlineAndDiscardsLateReplies) {
  const ConversationId probe = f.open_conversation();
  ConversationState s = ConversationState::probe(probe, "p", 100.0, std::nullopt);
  auto answer = [&](const AgentId& who, double prob) {
    return f.make(Performative::InformProbability, who, "p", probe, "s", ProbabilityAnswer{prob});
  };
  s = advance(s, Direction::Received, answer("a", 0.4), 50);
  s = advance(s, Direction::Received,
              f.make(Performative::RefuseProbability, "b", "p", probe, "s", ProbabilityRefusal{}), 60);
  EXPECT_EQ(s.phase, Phase::ProbeCollecting);
  EXPECT_EQ(expire(s, 99.9).phase, Phase::ProbeCollecting);
  s = advance(s, Direction::Received, answer("c", 0.9), 100);
  EXPECT_EQ(s.phase, Phase::ProbeClosed);
  EXPECT_EQ(s.answers.size(), 1u);
  EXPECT_EQ(s.refusals, 1u);
  EXPECT_EQ(s.discarded, 1u);
}

TEST_F(ProtocolTest, ProbeClosesAtQuota) {
  const ConversationId probe = f.open_conversation();
  ConversationState s = ConversationState::probe(probe, "p", std::nullopt, 2);
  for (const char* who : {"a", "b", "c"}) {
    s = advance(s, Direction::Received,
                f.make(Performative::InformProbability, who, "p", probe, "s", ProbabilityAnswer{0.1}),
                1);
  }
  EXPECT_EQ(s.phase, Phase::ProbeClosed);
  EXPECT_EQ(s.answers.size(), 2u);
  EXPECT_EQ(s.discarded, 1u);
  EXPECT_THROW(ConversationState::probe(probe, "p", std::nullopt, std::nullopt), ProtocolError);
}

TEST_F(ProtocolTest, SerializedForm) {
  const Message req = service_request();
  EXPECT_EQ(serialize(req), std::to_string(to_int(req.id)) + "|" + std::to_string(to_int(conv)) +
                                "|c|p|request-service|s|args=");
  const Message q = f.make(Performative::RequestProbability, "p", std::nullopt, conv, "s",
                           ProbabilityQuery{"x", "s", "response_time"});
  EXPECT_NE(serialize(q).find("|p|*|request-probability|s|suspect=x;service=s;feature=response_time"),
            std::string::npos);
  EXPECT_EQ(payload_to_string(ProbabilityAnswer{0.25}), "prob=0.250000");
}

}  // namespace
}  // namespace coopdiag
