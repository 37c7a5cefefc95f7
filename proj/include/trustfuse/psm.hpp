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
#ifndef TRUSTFUSE_PSM_HPP
#define TRUSTFUSE_PSM_HPP

#include <span>
#include <vector>

#include "trustfuse/ddf.hpp"
#include "trustfuse/trust.hpp"

namespace trustfuse {

struct PsmBatch {
  std::vector<Psm> track_psms;
  std::vector<Psm> agent_psms;
};

/// Trust pseudomeasurements from comparing the ego's fused picture with one
/// proximal agent's report, both restricted to that agent's footprint and
/// paired by gated position assignment:
///   - matched pair: the track is corroborated (value 1) with confidence
///     equal to the agent's expected trust; the agent is scored by the
///     track's expected trust with confidence rising with the track's
///     pseudo-count mass.
///   - fused track the agent should have seen but did not: the track takes a
///     negative PSM (value 0) at the agent's expected trust; the agent takes
///     value 1 - E[track trust], weighted down when the missed track is
///     itself dubious.
///   - agent tracks unknown to the fused set contribute no PSM here; they
///     seed new fused tracks during fusion and gain their own trust entries.
PsmBatch generate_psms(const std::vector<FusedTrack>& ego_fused,
                       std::span<const Track> agent_tracks, int agent_id,
                       const FovFootprint& footprint_k, const TrustStore& store,
                       double cluster_gate);

/// One proximal agent's contribution to a trust sweep.
struct ProximalObservation {
  int agent_id = -1;
  FovFootprint footprint;
  std::vector<Track> tracks;  ///< registered to ego frame
  BetaTrust prior{1.0, 1.0};  ///< first-contact trust prior for this agent
};

/// One per-frame pass of the trust estimator: propagate all entries toward
/// their priors, then alternate the conditional updates -- track trust from
/// PSMs conditioned on the previous agent trust, agent trust from PSMs
/// conditioned on the freshly updated track trust.
void trust_sweep(TrustStore& store, const std::vector<FusedTrack>& ego_fused,
                 std::span<const ProximalObservation> proximal,
                 const TrustConfig& cfg, double cluster_gate);

}  // namespace trustfuse

#endif  // TRUSTFUSE_PSM_HPP
