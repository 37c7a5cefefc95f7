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
#ifndef TRUSTFUSE_ATTACK_HPP
#define TRUSTFUSE_ATTACK_HPP

#include <Eigen/Core>
#include <map>
#include <set>
#include <vector>

#include "trustfuse/geometry.hpp"
#include "trustfuse/random.hpp"
#include "trustfuse/tracking.hpp"

namespace trustfuse {

/// Insider adversary acting on a compromised agent's detection stream,
/// upstream of its tracker.
struct AttackSpec {
  enum class Kind { kFalsePositive, kFalseNegative, kTranslation };
  Kind kind = Kind::kFalsePositive;
  std::set<int> victims;
  double start_time = 0.0;
  double fp_rate = 3.0;   ///< expected fake objects per frame
  double fn_prob = 0.5;   ///< per-object drop probability
  Eigen::Vector3d translation_offset{5.0, 0.0, 0.0};
};

/// Applies one attack to per-victim detection streams. The false-positive
/// attacker keeps a persistent pool of fake world objects per victim: each
/// frame it presents a Poisson(fp_rate)-sized slice of the pool, re-using
/// fakes still inside the victim's footprint and spawning new ones when the
/// pool runs short. Fakes therefore get stable identities and survive track
/// confirmation, while the per-frame injected count stays Poisson. Fake
/// detections carry the natural sensor noise statistics.
class Attacker {
 public:
  Attacker(const AttackSpec& spec, const DetectionNoise& noise)
      : spec_(spec), noise_(noise) {}

  /// Mutates a single victim's single-frame stream. Streams of agents not in
  /// the victim set pass through untouched.
  std::vector<Detection> apply(const std::vector<Detection>& dets,
                               int agent_id, const FovFootprint& footprint,
                               double t, RngStream& rng);

  const AttackSpec& spec() const { return spec_; }

  /// Ground-truth positions of the fakes presented to `agent_id` in its most
  /// recent frame; the evaluation oracle for fake-track bookkeeping.
  std::vector<Eigen::Vector2d> active_fakes(int agent_id) const;

 private:
  struct FakeObject {
    int id;
    Box3D box;
  };

  Detection fake_detection(const FakeObject& fake, double t, int agent_id,
                           RngStream& rng) const;

  AttackSpec spec_;
  DetectionNoise noise_;
  std::map<int, std::vector<FakeObject>> pools_;
  std::map<int, std::vector<int>> presented_;  // pool indices, last frame
  int next_fake_id_ = 0;
};

}  // namespace trustfuse

#endif  // TRUSTFUSE_ATTACK_HPP
