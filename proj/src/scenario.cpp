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
#include "trustfuse/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "trustfuse/network.hpp"
#include "trustfuse/psm.hpp"

namespace trustfuse {

Eigen::Vector2d waypoint_position(std::span<const Waypoint> waypoints,
                                  double t) {
  if (waypoints.empty()) return Eigen::Vector2d::Zero();
  if (t <= waypoints.front().t) return waypoints.front().xy;
  if (t >= waypoints.back().t) return waypoints.back().xy;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].t) {
      const Waypoint& a = waypoints[i - 1];
      const Waypoint& b = waypoints[i];
      const double span = b.t - a.t;
      const double w = span > 0.0 ? (t - a.t) / span : 1.0;
      return a.xy + w * (b.xy - a.xy);
    }
  }
  return waypoints.back().xy;
}

double waypoint_heading(std::span<const Waypoint> waypoints, double t,
                        double fallback) {
  if (waypoints.size() < 2) return fallback;
  std::size_t seg = waypoints.size() - 1;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].t) {
      seg = i;
      break;
    }
  }
  const Eigen::Vector2d d = waypoints[seg].xy - waypoints[seg - 1].xy;
  if (d.norm() < 1e-9) return fallback;
  return std::atan2(d.y(), d.x());
}

AgentPose agent_pose(const AgentSpec& agent, double t) {
  AgentPose pose;
  const Eigen::Vector2d xy = waypoint_position(agent.waypoints, t);
  pose.position = Eigen::Vector3d(xy.x(), xy.y(), agent.altitude);
  pose.yaw = waypoint_heading(agent.waypoints, t, 0.0);
  return pose;
}

std::vector<ObjectState> object_states(const Scenario& scenario, double t) {
  std::vector<ObjectState> out;
  out.reserve(scenario.objects.size());
  for (const ObjectSpec& obj : scenario.objects) {
    const Eigen::Vector2d xy = waypoint_position(obj.waypoints, t);
    Box3D box;
    box.center = Eigen::Vector3d(xy.x(), xy.y(), obj.size.x() / 2.0);
    box.height = obj.size.x();
    box.width = obj.size.y();
    box.length = obj.size.z();
    box.yaw = waypoint_heading(obj.waypoints, t, obj.base_yaw);
    out.push_back({obj.id, box});
  }
  return out;
}

namespace {

std::vector<Waypoint> random_trajectory(RngStream& rng, double extent,
                                        double duration, double speed_min,
                                        double speed_max) {
  std::vector<Waypoint> wps;
  Eigen::Vector2d pos(rng.uniform(-extent / 2.0, extent / 2.0),
                      rng.uniform(-extent / 2.0, extent / 2.0));
  double t = 0.0;
  wps.push_back({t, pos});
  while (t < duration) {
    const Eigen::Vector2d target(rng.uniform(-extent / 2.0, extent / 2.0),
                                 rng.uniform(-extent / 2.0, extent / 2.0));
    const double speed = rng.uniform(speed_min, speed_max);
    const double leg = (target - pos).norm() / std::max(speed, 1e-6);
    t += std::max(leg, 1.0);
    pos = target;
    wps.push_back({t, pos});
  }
  return wps;
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  if (cfg.num_agents < 1)
    throw std::invalid_argument("generate_scenario: num_agents must be >= 1");
  if (cfg.num_objects < 1)
    throw std::invalid_argument("generate_scenario: num_objects must be >= 1");
  if (cfg.density <= 0.0 || cfg.density > 1.0)
    throw std::invalid_argument("generate_scenario: density outside (0, 1]");
  if (cfg.dt <= 0.0) throw std::invalid_argument("generate_scenario: dt <= 0");

  Scenario scn;
  scn.seed = seed;
  scn.duration = cfg.duration;
  scn.dt = cfg.dt;
  scn.comm_range = cfg.comm_range;
  scn.noise = cfg.noise;
  scn.natural_fp_rate = cfg.natural_fp_rate;
  scn.natural_fn_prob = cfg.natural_fn_prob;
  scn.clutter_persistence = cfg.clutter_persistence;
  scn.nominal_height = cfg.nominal_height;
  scn.world_extent = cfg.world_extent;

  RngStream agent_rng = RngStream::derive(seed, "scenario/agents");
  std::vector<AgentSpec> all_agents;
  for (int i = 0; i < cfg.num_agents; ++i) {
    AgentSpec a;
    a.id = i;
    a.altitude = agent_rng.uniform(cfg.altitude_min, cfg.altitude_max);
    a.intrinsics = cfg.camera;
    a.prior = cfg.default_prior;
    a.waypoints = random_trajectory(agent_rng, cfg.world_extent, cfg.duration,
                                    cfg.agent_speed_min, cfg.agent_speed_max);
    all_agents.push_back(std::move(a));
  }

  // Density subsampling: a seeded shuffle picks the active subset.
  const int active =
      std::max(1, static_cast<int>(std::lround(cfg.density * cfg.num_agents)));
  RngStream density_rng = RngStream::derive(seed, "scenario/density");
  std::vector<int> order(cfg.num_agents);
  std::iota(order.begin(), order.end(), 0);
  for (int i = cfg.num_agents - 1; i > 0; --i)
    std::swap(order[i], order[density_rng.uniform_int(i + 1)]);
  order.resize(active);
  std::sort(order.begin(), order.end());
  for (int idx : order) scn.agents.push_back(all_agents[idx]);

  RngStream object_rng = RngStream::derive(seed, "scenario/objects");
  for (int i = 0; i < cfg.num_objects; ++i) {
    ObjectSpec o;
    o.id = i;
    for (int k = 0; k < 3; ++k)
      o.size(k) = std::max(
          0.5, cfg.object_size_mean(k) +
                   object_rng.uniform(-cfg.object_size_spread(k),
                                      cfg.object_size_spread(k)));
    o.base_yaw = object_rng.uniform(-M_PI, M_PI);
    if (object_rng.bernoulli(cfg.object_stationary_prob)) {
      const Eigen::Vector2d pos(
          object_rng.uniform(-cfg.world_extent / 2.0, cfg.world_extent / 2.0),
          object_rng.uniform(-cfg.world_extent / 2.0, cfg.world_extent / 2.0));
      o.waypoints = {{0.0, pos}};
    } else {
      o.waypoints =
          random_trajectory(object_rng, cfg.world_extent, cfg.duration,
                            cfg.object_speed_min, cfg.object_speed_max);
    }
    scn.objects.push_back(std::move(o));
  }

  if (cfg.attack.has_value()) {
    AttackSpec spec;
    spec.kind = cfg.attack->kind;
    spec.start_time = cfg.attack->start_time;
    spec.fp_rate = cfg.attack->fp_rate;
    spec.fn_prob = cfg.attack->fn_prob;
    spec.translation_offset = cfg.attack->translation_offset;
    if (!cfg.attack->victims.empty()) {
      spec.victims.insert(cfg.attack->victims.begin(),
                          cfg.attack->victims.end());
    } else {
      const int count = static_cast<int>(
          std::lround(cfg.attack->attacked_fraction * scn.agents.size()));
      RngStream victim_rng = RngStream::derive(seed, "scenario/victims");
      std::vector<int> ids;
      for (const AgentSpec& a : scn.agents) ids.push_back(a.id);
      for (int i = static_cast<int>(ids.size()) - 1; i > 0; --i)
        std::swap(ids[i], ids[victim_rng.uniform_int(i + 1)]);
      for (int i = 0; i < count && i < static_cast<int>(ids.size()); ++i)
        spec.victims.insert(ids[i]);
    }
    if (!spec.victims.empty()) scn.attack = spec;
  }
  return scn;
}

SensorSim::SensorSim(const Scenario& scenario, const AgentSpec& agent,
                     RngStream rng)
    : scenario_(scenario), agent_(agent), rng_(rng) {}

std::optional<Detection> SensorSim::detect(const AgentPose& pose,
                                           const Box3D& truth, double t) {
  const PixelBox projected = project_box(pose, agent_.intrinsics, truth);
  if (projected.area() <= 0.0 || !projected.inside_image(agent_.intrinsics))
    return std::nullopt;

  Detection d;
  d.box = upscale_box(pose, agent_.intrinsics, projected, truth.height);
  d.box.center.x() += rng_.normal(0.0, scenario_.noise.sigma_pos);
  d.box.center.y() += rng_.normal(0.0, scenario_.noise.sigma_pos);
  d.box.center.z() += rng_.normal(0.0, scenario_.noise.sigma_pos);
  d.box.height = std::max(0.1, d.box.height + rng_.normal(0.0, scenario_.noise.sigma_size));
  d.box.width = std::max(0.1, d.box.width + rng_.normal(0.0, scenario_.noise.sigma_size));
  d.box.length = std::max(0.1, d.box.length + rng_.normal(0.0, scenario_.noise.sigma_size));
  d.box.yaw = wrap_angle(d.box.yaw + rng_.normal(0.0, scenario_.noise.sigma_yaw));
  d.covariance = scenario_.noise.covariance();
  d.timestamp = t;
  d.source_agent = agent_.id;
  return d;
}

std::vector<Detection> SensorSim::frame(const AgentPose& pose,
                                        std::span<const ObjectState> objects,
                                        double t) {
  std::vector<Detection> out;

  for (const ObjectState& obj : objects) {
    std::optional<Detection> det = detect(pose, obj.box, t);
    if (!det.has_value()) continue;
    if (rng_.bernoulli(scenario_.natural_fn_prob)) continue;
    out.push_back(std::move(*det));
  }

  // Clutter follows a birth/death process whose steady-state concurrent
  // count is Poisson(natural_fp_rate): short-lived enough to be natural,
  // persistent enough that some clutter survives track confirmation.
  const double death = scenario_.clutter_persistence > 0.0
                           ? 1.0 / scenario_.clutter_persistence
                           : 1.0;
  std::vector<Clutter> alive;
  for (const Clutter& c : clutter_)
    if (!rng_.bernoulli(death)) alive.push_back(c);
  clutter_.swap(alive);
  const int births = rng_.poisson(scenario_.natural_fp_rate * death);
  const FovFootprint footprint = fov_footprint(pose, agent_.intrinsics);
  for (int i = 0; i < births; ++i) {
    Clutter c;
    const double lx =
        rng_.uniform(-footprint.half_extent_x, footprint.half_extent_x);
    const double ly =
        rng_.uniform(-footprint.half_extent_y, footprint.half_extent_y);
    const double rc = std::cos(footprint.yaw), rs = std::sin(footprint.yaw);
    c.box.center = Eigen::Vector3d(footprint.center.x() + rc * lx - rs * ly,
                                   footprint.center.y() + rs * lx + rc * ly,
                                   scenario_.nominal_height / 2.0);
    c.box.height = scenario_.nominal_height;
    c.box.width = rng_.uniform(1.5, 2.3);
    c.box.length = rng_.uniform(3.5, 5.2);
    c.box.yaw = rng_.uniform(-M_PI, M_PI);
    clutter_.push_back(c);
  }
  for (const Clutter& c : clutter_) {
    std::optional<Detection> det = detect(pose, c.box, t);
    if (det.has_value()) out.push_back(std::move(*det));
  }
  return out;
}

namespace {

struct AgentRuntime {
  const AgentSpec* spec = nullptr;
  std::unique_ptr<SensorSim> sensor;
  std::unique_ptr<MultiTargetTracker> tracker;
  RngStream attack_rng{0};
  TrustStore trust;
  FusedIdRegistry registry;
  std::vector<FusedTrack> prev_fused;
};

BetaTrust prior_for(PriorLabel label, const TrustConfig& cfg) {
  switch (label) {
    case PriorLabel::kTrusted:
      return cfg.prior_trusted;
    case PriorLabel::kDistrusted:
      return cfg.prior_distrusted;
    case PriorLabel::kNeutral:
      break;
  }
  return cfg.prior_neutral;
}

}  // namespace

void run_episode(const Scenario& scenario, const PipelineOptions& options,
                 FrameObserver& observer) {
  const int n = static_cast<int>(scenario.agents.size());
  const int frames =
      static_cast<int>(std::floor(scenario.duration / scenario.dt + 1e-9));

  std::vector<AgentRuntime> agents(n);
  for (int i = 0; i < n; ++i) {
    const AgentSpec& spec = scenario.agents[i];
    agents[i].spec = &spec;
    agents[i].sensor = std::make_unique<SensorSim>(
        scenario, spec, RngStream::derive(scenario.seed, "sensor", spec.id));
    agents[i].tracker =
        std::make_unique<MultiTargetTracker>(options.tracker, spec.id);
    agents[i].attack_rng = RngStream::derive(scenario.seed, "attack", spec.id);
  }

  std::optional<Attacker> attacker;
  if (scenario.attack.has_value())
    attacker.emplace(*scenario.attack, scenario.noise);

  const AgentPose world_origin;  // shared navigation frame
  std::vector<AgentPose> poses(n);
  std::vector<FovFootprint> footprints(n);

  for (int f = 0; f < frames; ++f) {
    const double t = f * scenario.dt;
    FrameLog log;
    log.t = t;
    log.truths = object_states(scenario, t);

    for (int i = 0; i < n; ++i) {
      poses[i] = agent_pose(*agents[i].spec, t);
      footprints[i] = fov_footprint(poses[i], agents[i].spec->intrinsics);
    }
    const Adjacency adj = connectivity(poses, scenario.comm_range);

    // Sense, attack, track.
    std::vector<std::vector<Detection>> detections(n);
    for (int i = 0; i < n; ++i) {
      detections[i] = agents[i].sensor->frame(poses[i], log.truths, t);
      if (attacker.has_value()) {
        detections[i] =
            attacker->apply(detections[i], agents[i].spec->id, footprints[i],
                            t, agents[i].attack_rng);
      }
      agents[i].tracker->step(detections[i], t);
    }
    if (attacker.has_value()) {
      for (int victim : scenario.attack->victims) {
        auto fakes = attacker->active_fakes(victim);
        if (!fakes.empty()) log.fakes[victim] = std::move(fakes);
      }
    }

    // Broadcast: one packet per confirmed track. The frame barrier holds --
    // every packet is encoded before any fusion consumes one.
    std::vector<std::vector<std::vector<std::uint8_t>>> wire(n);
    for (int i = 0; i < n; ++i) {
      for (const Track& trk : agents[i].tracker->confirmed()) {
        wire[i].push_back(encode_packet(make_packet(
            trk, poses[i], agents[i].spec->intrinsics, scenario.camera_mount)));
      }
    }

    log.agents.resize(n);
    for (int i = 0; i < n; ++i) {
      AgentRuntime& ego = agents[i];
      const std::vector<Track> local = ego.tracker->confirmed();

      // Receive and register proximal tracks.
      std::vector<RemoteTrackSet> remote_sets;
      std::vector<ProximalObservation> proximal;
      int packets_received = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i || !adj(i, j)) continue;
        RemoteTrackSet set;
        set.agent_id = agents[j].spec->id;
        for (const auto& bytes : wire[j]) {
          const TrackPacket packet = decode_packet(bytes);
          Track trk = track_from_packet(packet, set.agent_id, t,
                                        {1.8, 2.0, 4.5}, 4.0);
          set.tracks.push_back(
              register_track(trk, world_origin, world_origin));
          ++packets_received;
        }
        if (options.trust_enabled) {
          ProximalObservation obs;
          obs.agent_id = set.agent_id;
          obs.footprint = footprints[j].shrunk(options.fov_trust_margin);
          obs.tracks = set.tracks;
          obs.prior = prior_for(agents[j].spec->prior, options.trust);
          proximal.push_back(std::move(obs));
        }
        log.agents[i].neighbors.push_back(set.agent_id);
        remote_sets.push_back(std::move(set));
      }

      if (options.trust_enabled)
        trust_sweep(ego.trust, ego.prev_fused, proximal, options.trust,
                    options.ddf.cluster_gate);

      std::vector<FusedTrack> fused = cascaded_fuse(
          ego.spec->id, local, remote_sets,
          options.trust_enabled ? &ego.trust : nullptr, options.fusion_mode,
          options.ddf, ego.registry);
      ego.registry.end_frame();

      if (options.trust_enabled) {
        std::vector<int> live;
        live.reserve(fused.size());
        for (const FusedTrack& ft : fused) live.push_back(ft.id);
        ego.trust.prune_tracks(live);
        trust_filter(fused, ego.trust, options.trust.tau_ignore);
      }

      AgentFrameLog& alog = log.agents[i];
      alog.agent_id = ego.spec->id;
      alog.pose = poses[i];
      alog.footprint = footprints[i];
      alog.detections = std::move(detections[i]);
      alog.local_tracks = local;
      alog.packets_received = packets_received;
      alog.fused = fused;
      alog.trust = ego.trust;

      ego.prev_fused = std::move(fused);
    }

    observer.frame(log);
  }
}

std::vector<FrameLog> run_episode(const Scenario& scenario,
                                  const PipelineOptions& options) {
  struct Collector : FrameObserver {
    std::vector<FrameLog> logs;
    void frame(const FrameLog& log) override { logs.push_back(log); }
  } collector;
  run_episode(scenario, options, collector);
  return std::move(collector.logs);
}

}  // namespace trustfuse
