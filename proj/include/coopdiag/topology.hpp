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

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "coopdiag/behavior.hpp"
#include "coopdiag/ids.hpp"

namespace coopdiag {

/// Undirected graph of agents; an edge joins a client to any provider it may
/// be bound to.
class Topology {
 public:
  void add_agent(const AgentId& id) {
    adjacency_.try_emplace(id);
    cache_.clear();
  }

  void add_edge(const AgentId& a, const AgentId& b) {
    if (a == b) throw std::invalid_argument("self loop on agent '" + a + "'");
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
    cache_.clear();
  }

  [[nodiscard]] bool contains(const AgentId& id) const { return adjacency_.contains(id); }

  [[nodiscard]] bool adjacent(const AgentId& a, const AgentId& b) const {
    auto it = adjacency_.find(a);
    return it != adjacency_.end() && it->second.contains(b);
  }

  [[nodiscard]] const std::set<AgentId>& neighbors(const AgentId& id) const {
    return adjacency_.at(id);
  }

  [[nodiscard]] std::vector<AgentId> agents() const {
    std::vector<AgentId> out;
    for (const auto& [id, _] : adjacency_) out.push_back(id);
    return out;
  }

  [[nodiscard]] std::size_t size() const { return adjacency_.size(); }

  /// Shortest-path hop count; nullopt when disconnected or unknown.
  [[nodiscard]] std::optional<std::size_t> hop_distance(const AgentId& a, const AgentId& b) const {
    if (!contains(a) || !contains(b)) return std::nullopt;
    const auto& dist = distances_from(a);
    auto it = dist.find(b);
    if (it == dist.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] double similarity(const AgentId& a, const AgentId& b) const {
    return similarity_index(hop_distance(a, b));
  }

 private:
  const std::map<AgentId, std::size_t>& distances_from(const AgentId& source) const {
    auto cached = cache_.find(source);
    if (cached != cache_.end()) return cached->second;
    std::map<AgentId, std::size_t> dist{{source, 0}};
    std::deque<AgentId> frontier{source};
    while (!frontier.empty()) {
      const AgentId at = frontier.front();
      frontier.pop_front();
      for (const AgentId& next : adjacency_.at(at)) {
        if (dist.try_emplace(next, dist[at] + 1).second) frontier.push_back(next);
      }
    }
    return cache_.emplace(source, std::move(dist)).first->second;
  }

  std::map<AgentId, std::set<AgentId>> adjacency_;
  mutable std::map<AgentId, std::map<AgentId, std::size_t>> cache_;
};

}  // namespace coopdiag
