/*
 * Copyright 2025 The TrustFuse Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "trustfuse/trust.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace trustfuse {

BetaTrust update_trust(const BetaTrust& prior, std::span<const Psm> psms,
                       const TrustConfig& cfg) {
  if (!prior.valid()) throw std::invalid_argument("update_trust: invalid prior");

  std::vector<double> dalpha, dbeta;
  dalpha.reserve(psms.size());
  dbeta.reserve(psms.size());
  for (const Psm& p : psms) {
    dalpha.push_back(p.confidence * p.value);
    const double w = p.value < cfg.negativity_threshold ? cfg.negativity_bias : 1.0;
    dbeta.push_back(w * p.confidence * (1.0 - p.value));
  }
  std::sort(dalpha.begin(), dalpha.end());
  std::sort(dbeta.begin(), dbeta.end());

  BetaTrust out = prior;
  for (double d : dalpha) out.alpha += d;
  for (double d : dbeta) out.beta += d;
  return out;
}

BetaTrust propagate_trust(const BetaTrust& value, const BetaTrust& anchor,
                          double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("propagate_trust: lambda outside [0,1]");
  return BetaTrust{lambda * value.alpha + (1.0 - lambda) * anchor.alpha,
                   lambda * value.beta + (1.0 - lambda) * anchor.beta};
}

std::vector<Track> fov_filter(std::span<const Track> tracks,
                              const FovFootprint& footprint) {
  std::vector<Track> out;
  for (const Track& t : tracks)
    if (footprint.contains(t.position().head<2>())) out.push_back(t);
  return out;
}

BetaTrust& TrustStore::agent(int agent_id, const BetaTrust& prior) {
  auto [it, inserted] = agent_trust_.try_emplace(agent_id, prior);
  if (inserted) agent_anchor_[agent_id] = prior;
  return it->second;
}

BetaTrust& TrustStore::track(int track_id, const BetaTrust& prior) {
  return track_trust_.try_emplace(track_id, prior).first->second;
}

const BetaTrust* TrustStore::find_agent(int agent_id) const {
  auto it = agent_trust_.find(agent_id);
  return it == agent_trust_.end() ? nullptr : &it->second;
}

const BetaTrust* TrustStore::find_track(int track_id) const {
  auto it = track_trust_.find(track_id);
  return it == track_trust_.end() ? nullptr : &it->second;
}

void TrustStore::prune_tracks(std::span<const int> live_ids) {
  std::set<int> live(live_ids.begin(), live_ids.end());
  std::erase_if(track_trust_,
                [&](const auto& kv) { return !live.contains(kv.first); });
}

void TrustStore::propagate_all(double lambda, const BetaTrust& neutral_anchor) {
  for (auto& [id, trust] : agent_trust_)
    trust = propagate_trust(trust, agent_anchor_.at(id), lambda);
  for (auto& [id, trust] : track_trust_)
    trust = propagate_trust(trust, neutral_anchor, lambda);
}

std::string TrustStore::to_record() const {
  std::string out;
  char line[96];
  for (const auto& [id, t] : agent_trust_) {
    std::snprintf(line, sizeof(line), "agent %d %.9g %.9g\n", id, t.alpha,
                  t.beta);
    out += line;
  }
  for (const auto& [id, t] : track_trust_) {
    std::snprintf(line, sizeof(line), "track %d %.9g %.9g\n", id, t.alpha,
                  t.beta);
    out += line;
  }
  return out;
}

}  // namespace trustfuse
