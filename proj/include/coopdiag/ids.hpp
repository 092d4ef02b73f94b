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
#include <map>
#include <string>

namespace coopdiag {

using AgentId = std::string;
using ServiceId = std::string;
using FeatureName = std::string;

enum class MessageId : std::uint64_t {};
enum class ConversationId : std::uint64_t {};

constexpr std::uint64_t to_int(MessageId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t to_int(ConversationId id) { return static_cast<std::uint64_t>(id); }

/// Measured value per quality feature (M_q).
using Measurements = std::map<FeatureName, double>;

struct QualityFeature {
  FeatureName name;
  std::string unit;
};

inline const FeatureName kResponseTime = "response_time";
inline const FeatureName kCost = "cost";

}  // namespace coopdiag
