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
#include "trustfuse/attack.hpp"

namespace trustfuse {

Detection Attacker::fake_detection(const FakeObject& fake, double t,
                                   int agent_id, RngStream& rng) const {
  Detection d;
  d.box = fake.box;
  d.box.center.x() += rng.normal(0.0, noise_.sigma_pos);
  d.box.center.y() += rng.normal(0.0, noise_.sigma_pos);
  d.box.center.z() += rng.normal(0.0, noise_.sigma_pos);
  d.box.height = std::max(0.1, fake.box.height + rng.normal(0.0, noise_.sigma_size));
  d.box.width = std::max(0.1, fake.box.width + rng.normal(0.0, noise_.sigma_size));
  d.box.length = std::max(0.1, fake.box.length + rng.normal(0.0, noise_.sigma_size));
  d.box.yaw = wrap_angle(fake.box.yaw + rng.normal(0.0, noise_.sigma_yaw));
  d.covariance = noise_.covariance();
  d.timestamp = t;
  d.source_agent = agent_id;
  return d;
}

std::vector<Detection> Attacker::apply(const std::vector<Detection>& dets,
                                       int agent_id,
                                       const FovFootprint& footprint, double t,
                                       RngStream& rng) {
  if (!spec_.victims.contains(agent_id) || t < spec_.start_time) return dets;

  std::vector<Detection> out;
  switch (spec_.kind) {
    case AttackSpec::Kind::kFalseNegative: {
      for (const Detection& d : dets)
        if (!rng.bernoulli(spec_.fn_prob)) out.push_back(d);
      return out;
    }
    case AttackSpec::Kind::kTranslation: {
      out = dets;
      for (Detection& d : out) d.box.center += spec_.translation_offset;
      return out;
    }
    case AttackSpec::Kind::kFalsePositive: {
      out = dets;
      auto& pool = pools_[agent_id];
      auto& presented = presented_[agent_id];
      presented.clear();

      const int target = rng.poisson(spec_.fp_rate);
      for (int i = 0; i < static_cast<int>(pool.size()) &&
                      static_cast<int>(presented.size()) < target;
           ++i) {
        if (footprint.contains(pool[i].box.center.head<2>()))
          presented.push_back(i);
      }
      while (static_cast<int>(presented.size()) < target) {
        FakeObject fake;
        fake.id = next_fake_id_++;
        const double lx = rng.uniform(-footprint.half_extent_x,
                                      footprint.half_extent_x);
        const double ly = rng.uniform(-footprint.half_extent_y,
                                      footprint.half_extent_y);
        const double c = std::cos(footprint.yaw), s = std::sin(footprint.yaw);
        fake.box.center =
            Eigen::Vector3d(footprint.center.x() + c * lx - s * ly,
                            footprint.center.y() + s * lx + c * ly, 0.9);
        fake.box.height = 1.8;
        fake.box.width = rng.uniform(1.6, 2.2);
        fake.box.length = rng.uniform(3.8, 5.0);
        fake.box.yaw = rng.uniform(-M_PI, M_PI);
        presented.push_back(static_cast<int>(pool.size()));
        pool.push_back(fake);
      }
      for (int idx : presented)
        out.push_back(fake_detection(pool[idx], t, agent_id, rng));
      return out;
    }
  }
  return dets;
}

std::vector<Eigen::Vector2d> Attacker::active_fakes(int agent_id) const {
  std::vector<Eigen::Vector2d> out;
  auto pool_it = pools_.find(agent_id);
  auto pres_it = presented_.find(agent_id);
  if (pool_it == pools_.end() || pres_it == presented_.end()) return out;
  for (int idx : pres_it->second)
    out.push_back(pool_it->second[idx].box.center.head<2>());
  return out;
}

}  // namespace trustfuse
