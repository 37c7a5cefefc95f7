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
#include "trustfuse/psm.hpp"

#include <map>

#include "trustfuse/assignment.hpp"

namespace trustfuse {

namespace {

const BetaTrust kNeutral{1.0, 1.0};

// Confidence in statements derived from a track's trust estimate: the
// fraction of the Bernoulli variance bound E(1-E) resolved by the
// pseudo-counts, (a+b)/(a+b+1).
double count_confidence(const BetaTrust& t) {
  const double s = t.alpha + t.beta;
  return s / (s + 1.0);
}

struct Pairing {
  // (fused index, agent track index) matches plus fused tracks inside the
  // footprint that the agent failed to report.
  std::vector<std::pair<int, int>> matched;
  std::vector<int> missed_fused;
};

Pairing pair_reports(const std::vector<FusedTrack>& ego_fused,
                     std::span<const Track> agent_tracks,
                     const FovFootprint& footprint, double gate) {
  Pairing out;
  std::vector<int> fused_in;
  for (int i = 0; i < static_cast<int>(ego_fused.size()); ++i)
    if (footprint.contains(ego_fused[i].position().head<2>()))
      fused_in.push_back(i);
  std::vector<int> remote_in;
  for (int j = 0; j < static_cast<int>(agent_tracks.size()); ++j)
    if (footprint.contains(agent_tracks[j].position().head<2>()))
      remote_in.push_back(j);

  Eigen::MatrixXd cost(fused_in.size(), remote_in.size());
  for (std::size_t i = 0; i < fused_in.size(); ++i)
    for (std::size_t j = 0; j < remote_in.size(); ++j)
      cost(i, j) = (ego_fused[fused_in[i]].position() -
                    agent_tracks[remote_in[j]].position())
                       .norm();
  const AssignmentResult assoc = solve_assignment(cost, gate);

  for (const auto& m : assoc.matches)
    out.matched.emplace_back(fused_in[m.row], remote_in[m.col]);
  for (int i : assoc.unmatched_rows) out.missed_fused.push_back(fused_in[i]);
  return out;
}

BetaTrust track_trust_or_neutral(const TrustStore& store, int fused_id) {
  const BetaTrust* t = store.find_track(fused_id);
  return t == nullptr ? kNeutral : *t;
}

PsmBatch emit_psms(const Pairing& pairing,
                   const std::vector<FusedTrack>& ego_fused, int agent_id,
                   const TrustStore& store) {
  PsmBatch batch;
  const BetaTrust* agent_trust = store.find_agent(agent_id);
  const double agent_e = agent_trust == nullptr ? 0.5 : agent_trust->mean();

  for (const auto& [fi, rj] : pairing.matched) {
    const int fid = ego_fused[fi].id;
    const BetaTrust tc = track_trust_or_neutral(store, fid);
    batch.track_psms.push_back({Psm::Target::kTrack, fid, 1.0, agent_e});
    batch.agent_psms.push_back(
        {Psm::Target::kAgent, agent_id, tc.mean(), count_confidence(tc)});
  }
  for (int fi : pairing.missed_fused) {
    const int fid = ego_fused[fi].id;
    const BetaTrust tc = track_trust_or_neutral(store, fid);
    batch.track_psms.push_back({Psm::Target::kTrack, fid, 0.0, agent_e});
    batch.agent_psms.push_back({Psm::Target::kAgent, agent_id,
                                1.0 - tc.mean(),
                                tc.mean() * count_confidence(tc)});
  }
  return batch;
}

}  // namespace

PsmBatch generate_psms(const std::vector<FusedTrack>& ego_fused,
                       std::span<const Track> agent_tracks, int agent_id,
                       const FovFootprint& footprint_k, const TrustStore& store,
                       double cluster_gate) {
  const Pairing pairing =
      pair_reports(ego_fused, agent_tracks, footprint_k, cluster_gate);
  return emit_psms(pairing, ego_fused, agent_id, store);
}

void trust_sweep(TrustStore& store, const std::vector<FusedTrack>& ego_fused,
                 std::span<const ProximalObservation> proximal,
                 const TrustConfig& cfg, double cluster_gate) {
  store.propagate_all(cfg.forgetting, cfg.prior_neutral);

  for (const ProximalObservation& obs : proximal)
    store.agent(obs.agent_id, obs.prior);
  for (const FusedTrack& f : ego_fused) store.track(f.id, cfg.prior_neutral);

  // Track-trust phase, conditioned on the propagated agent trust.
  std::vector<Pairing> pairings;
  pairings.reserve(proximal.size());
  std::map<int, std::vector<Psm>> by_track;
  for (const ProximalObservation& obs : proximal) {
    pairings.push_back(
        pair_reports(ego_fused, obs.tracks, obs.footprint, cluster_gate));
    PsmBatch batch = emit_psms(pairings.back(), ego_fused, obs.agent_id, store);
    for (const Psm& p : batch.track_psms) by_track[p.target_id].push_back(p);
  }
  for (const auto& [fused_id, psms] : by_track) {
    BetaTrust& t = store.track(fused_id, cfg.prior_neutral);
    t = update_trust(t, psms, cfg);
  }

  // Agent-trust phase, conditioned on the updated track trust. The pairings
  // are reused so both phases see the same report comparison.
  std::map<int, std::vector<Psm>> by_agent;
  for (std::size_t k = 0; k < proximal.size(); ++k) {
    PsmBatch batch =
        emit_psms(pairings[k], ego_fused, proximal[k].agent_id, store);
    for (const Psm& p : batch.agent_psms) by_agent[p.target_id].push_back(p);
  }
  for (const auto& [agent_id, psms] : by_agent) {
    BetaTrust& t = store.agent(agent_id, cfg.prior_neutral);
    t = update_trust(t, psms, cfg);
  }
}

}  // namespace trustfuse
