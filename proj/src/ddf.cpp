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
#include "trustfuse/ddf.hpp"

#include <algorithm>

#include "trustfuse/assignment.hpp"

namespace trustfuse {

namespace {

constexpr int kFusedIdx[kFusedDim] = {0, 1, 2, 3, 4, 5, 9};

const BetaTrust kNeutralTrust{1.0, 1.0};

BetaTrust agent_trust_or_neutral(const TrustStore* store, int agent_id) {
  if (store == nullptr) return kNeutralTrust;
  const BetaTrust* t = store->find_agent(agent_id);
  return t == nullptr ? kNeutralTrust : *t;
}

}  // namespace

FusedVector project_fused(const Track& track) {
  FusedVector v;
  for (int i = 0; i < kFusedDim; ++i) v(i) = track.state(kFusedIdx[i]);
  return v;
}

FusedMatrix project_fused_covariance(const Track& track) {
  FusedMatrix m;
  for (int i = 0; i < kFusedDim; ++i)
    for (int j = 0; j < kFusedDim; ++j)
      m(i, j) = track.covariance(kFusedIdx[i], kFusedIdx[j]);
  return m;
}

void inject_fused(Track& track, const FusedVector& state,
                  const FusedMatrix& covariance) {
  for (int i = 0; i < kFusedDim; ++i) track.state(kFusedIdx[i]) = state(i);
  track.state(9) = wrap_angle(track.state(9));
  // The fused block's correlation with the platform-local size states is
  // unknown after fusion: keep the size block, zero the cross terms.
  for (int i = 0; i < kFusedDim; ++i) {
    for (int j = 0; j < kFusedDim; ++j)
      track.covariance(kFusedIdx[i], kFusedIdx[j]) = covariance(i, j);
    for (int s = 6; s < 9; ++s) {
      track.covariance(kFusedIdx[i], s) = 0.0;
      track.covariance(s, kFusedIdx[i]) = 0.0;
    }
  }
}

Track register_track(const Track& track, const AgentPose& source_frame,
                     const AgentPose& ego_frame) {
  const double psi = source_frame.yaw - ego_frame.yaw;
  const double c = std::cos(psi), s = std::sin(psi);
  Eigen::Matrix3d rot;
  rot << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;

  const double ce = std::cos(ego_frame.yaw), se = std::sin(ego_frame.yaw);
  Eigen::Matrix3d ego_inv;
  ego_inv << ce, se, 0.0, -se, ce, 0.0, 0.0, 0.0, 1.0;
  const Eigen::Vector3d translation =
      ego_inv * (source_frame.position - ego_frame.position);

  StateMatrix jac = StateMatrix::Identity();
  jac.block<3, 3>(0, 0) = rot;
  jac.block<3, 3>(3, 3) = rot;

  Track out = track;
  out.state = jac * track.state;
  out.state.segment<3>(0) += translation;
  out.state(9) = wrap_angle(track.state(9) + psi);
  out.covariance = jac * track.covariance * jac.transpose();
  return out;
}

void FusedIdRegistry::begin_frame() {
  for (auto& [key, entry] : ego_map_) entry.second = false;
  for (auto& [key, entry] : remote_map_) entry.second = false;
}

int FusedIdRegistry::ego_id(int ego_track_id) {
  auto [it, inserted] =
      ego_map_.try_emplace(ego_track_id, std::pair{next_id_, true});
  if (inserted)
    ++next_id_;
  else
    it->second.second = true;
  return it->second.first;
}

int FusedIdRegistry::remote_id(int agent_id, int remote_track_id) {
  auto [it, inserted] = remote_map_.try_emplace(
      std::pair{agent_id, remote_track_id}, std::pair{next_id_, true});
  if (inserted)
    ++next_id_;
  else
    it->second.second = true;
  return it->second.first;
}

void FusedIdRegistry::end_frame() {
  std::erase_if(ego_map_, [](const auto& kv) { return !kv.second.second; });
  std::erase_if(remote_map_, [](const auto& kv) { return !kv.second.second; });
}

namespace {

// Working entry during the cascade.
struct Entry {
  FusedTrack fused;
  // Accumulated inputs for trust-weighted joint fusion. The seed occupies
  // index 0; ego seeds carry the configured self trust.
  std::vector<FusedVector> means;
  std::vector<FusedMatrix> covs;
  std::vector<BetaTrust> trusts;
  std::vector<int> contributor_ids;
};

Entry make_entry(int fused_id, const Track& track, int contributor,
                 const BetaTrust& trust) {
  Entry e;
  e.fused.id = fused_id;
  e.fused.track = track;
  e.fused.contributors = {{contributor, 1.0}};
  e.means.push_back(project_fused(track));
  e.covs.push_back(project_fused_covariance(track));
  e.trusts.push_back(trust);
  e.contributor_ids.push_back(contributor);
  return e;
}

}  // namespace

std::vector<FusedTrack> cascaded_fuse(int ego_agent_id,
                                      const std::vector<Track>& ego_tracks,
                                      const std::vector<RemoteTrackSet>& proximal,
                                      const TrustStore* trust, FusionMode mode,
                                      const DdfConfig& cfg,
                                      FusedIdRegistry& registry) {
  registry.begin_frame();

  std::vector<Entry> entries;
  entries.reserve(ego_tracks.size());
  for (const Track& t : ego_tracks)
    entries.push_back(
        make_entry(registry.ego_id(t.id), t, ego_agent_id, cfg.self_trust));

  for (const RemoteTrackSet& remote : proximal) {
    const BetaTrust remote_trust =
        agent_trust_or_neutral(trust, remote.agent_id);

    const int ne = static_cast<int>(entries.size());
    const int nr = static_cast<int>(remote.tracks.size());
    Eigen::MatrixXd cost(ne, nr);
    for (int i = 0; i < ne; ++i)
      for (int j = 0; j < nr; ++j)
        cost(i, j) = (entries[i].fused.track.position() -
                      remote.tracks[j].position())
                         .norm();
    const AssignmentResult assoc = solve_assignment(cost, cfg.cluster_gate);

    for (const auto& m : assoc.matches) {
      Entry& e = entries[m.row];
      const Track& rt = remote.tracks[m.col];
      if (mode == FusionMode::kPlain) {
        const auto fused = ci_pairwise(
            project_fused(e.fused.track), project_fused_covariance(e.fused.track),
            project_fused(rt), project_fused_covariance(rt), cfg.omega_tol);
        inject_fused(e.fused.track, fused.mean, fused.covariance);
        for (auto& [id, w] : e.fused.contributors) w *= fused.omega;
        e.fused.contributors.emplace_back(remote.agent_id, 1.0 - fused.omega);
      } else {
        e.means.push_back(project_fused(rt));
        e.covs.push_back(project_fused_covariance(rt));
        e.trusts.push_back(remote_trust);
        e.contributor_ids.push_back(remote.agent_id);
      }
    }
    for (int j : assoc.unmatched_cols) {
      const Track& rt = remote.tracks[j];
      entries.push_back(make_entry(registry.remote_id(remote.agent_id, rt.id),
                                   rt, remote.agent_id, remote_trust));
    }
  }

  std::vector<FusedTrack> out;
  out.reserve(entries.size());
  for (Entry& e : entries) {
    if (mode == FusionMode::kTrustWeighted) {
      const auto fused = ci_trust_weighted<FusedVector, FusedMatrix>(
          e.means, e.covs, e.trusts);
      inject_fused(e.fused.track, fused.mean, fused.covariance);
      e.fused.contributors.clear();
      for (std::size_t i = 0; i < e.contributor_ids.size(); ++i)
        e.fused.contributors.emplace_back(e.contributor_ids[i],
                                          fused.weights[i]);
      e.fused.fusion_confidence = fused.confidence;
    } else if (trust != nullptr) {
      double zeta = 0.0;
      for (const auto& [id, w] : e.fused.contributors) {
        const BetaTrust t = id == ego_agent_id
                                ? cfg.self_trust
                                : agent_trust_or_neutral(trust, id);
        zeta += w * t.variance();
      }
      e.fused.fusion_confidence = zeta;
    }
    out.push_back(std::move(e.fused));
  }
  return out;
}

void trust_filter(std::vector<FusedTrack>& fused, const TrustStore& trust,
                  double tau_ignore) {
  for (FusedTrack& f : fused) {
    const BetaTrust* t = trust.find_track(f.id);
    f.flag = (t != nullptr && t->mean() < tau_ignore) ? TrustFlag::kFlagged
                                                      : TrustFlag::kRetained;
  }
}

}  // namespace trustfuse
