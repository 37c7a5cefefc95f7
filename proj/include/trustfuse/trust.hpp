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
#ifndef TRUSTFUSE_TRUST_HPP
#define TRUSTFUSE_TRUST_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "trustfuse/geometry.hpp"
#include "trustfuse/tracking.hpp"

namespace trustfuse {

/// Beta-distributed belief over [0,1] that an agent or a track is
/// trustworthy, held as pseudo-counts.
struct BetaTrust {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
  double variance() const {
    const double s = alpha + beta;
    return alpha * beta / (s * s * (s + 1.0));
  }
  bool valid() const { return alpha > 0.0 && beta > 0.0; }
};

/// Pseudomeasurement of trust: a (value, confidence) pair on [0,1]^2 aimed
/// at one agent or one track.
struct Psm {
  enum class Target { kAgent, kTrack };
  Target target_kind = Target::kTrack;
  int target_id = -1;
  double value = 0.0;
  double confidence = 0.0;
};

struct TrustConfig {
  double negativity_bias = 4.0;       ///< extra weight on distrusting evidence
  double negativity_threshold = 0.5;  ///< PSM values below this are "negative"
  BetaTrust prior_trusted{10.0, 1.0};
  BetaTrust prior_neutral{1.0, 1.0};
  BetaTrust prior_distrusted{1.0, 10.0};
  double forgetting = 0.98;  ///< per-frame pull toward the prior
  double tau_ignore = 0.4;   ///< tracks with E[trust] below this are flagged
};

/// Conjugate Beta update from a batch of PSMs with negativity weighting:
/// positive evidence adds c*v to alpha; negative evidence adds w*c*(1-v) to
/// beta, where w is the negativity bias for values below the threshold.
/// Contributions are summed in sorted order, so any permutation of the same
/// batch produces bit-identical posteriors.
BetaTrust update_trust(const BetaTrust& prior, std::span<const Psm> psms,
                       const TrustConfig& cfg);

/// Forgetting step of the trust HMM: pseudo-counts relax toward the anchor
/// prior, so stale estimates lose weight when no evidence arrives.
BetaTrust propagate_trust(const BetaTrust& value, const BetaTrust& anchor,
                          double lambda);

/// Tracks whose position lies inside the footprint.
std::vector<Track> fov_filter(std::span<const Track> tracks,
                              const FovFootprint& footprint);

/// Per-ego store of agent and track trust states. Track entries are keyed by
/// fused-track id and live exactly as long as the track does.
class TrustStore {
 public:
  /// Returns the entry for an agent, creating it from `prior` on first use.
  BetaTrust& agent(int agent_id, const BetaTrust& prior);
  /// Returns the entry for a fused track, creating it from `prior` first.
  BetaTrust& track(int track_id, const BetaTrust& prior);

  const BetaTrust* find_agent(int agent_id) const;
  const BetaTrust* find_track(int track_id) const;

  const std::map<int, BetaTrust>& agents() const { return agent_trust_; }
  const std::map<int, BetaTrust>& tracks() const { return track_trust_; }

  /// Drops track entries whose id is not in `live_ids` (sorted not required).
  void prune_tracks(std::span<const int> live_ids);

  /// Relaxes every entry toward its anchor prior.
  void propagate_all(double lambda, const BetaTrust& neutral_anchor);

  /// One "id alpha beta" line per entry, agents then tracks; the per-frame
  /// log record format.
  std::string to_record() const;

 private:
  std::map<int, BetaTrust> agent_trust_;
  std::map<int, BetaTrust> track_trust_;
  std::map<int, BetaTrust> agent_anchor_;
};

}  // namespace trustfuse

#endif  // TRUSTFUSE_TRUST_HPP
