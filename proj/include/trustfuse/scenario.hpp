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
#ifndef TRUSTFUSE_SCENARIO_HPP
#define TRUSTFUSE_SCENARIO_HPP

#include <map>
#include <optional>
#include <vector>

#include "trustfuse/attack.hpp"
#include "trustfuse/ddf.hpp"
#include "trustfuse/geometry.hpp"
#include "trustfuse/random.hpp"
#include "trustfuse/tracking.hpp"
#include "trustfuse/trust.hpp"

namespace trustfuse {

struct Waypoint {
  double t = 0.0;
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
};

/// Piecewise-linear position at time t; clamps outside the waypoint span.
Eigen::Vector2d waypoint_position(std::span<const Waypoint> waypoints, double t);
/// Heading of the active segment (fallback for degenerate segments).
double waypoint_heading(std::span<const Waypoint> waypoints, double t,
                        double fallback);

enum class PriorLabel { kTrusted, kNeutral, kDistrusted };

struct AgentSpec {
  int id = -1;
  std::vector<Waypoint> waypoints;
  double altitude = 90.0;
  CameraIntrinsics intrinsics;
  PriorLabel prior = PriorLabel::kNeutral;
};

struct ObjectSpec {
  int id = -1;
  std::vector<Waypoint> waypoints;
  Eigen::Vector3d size{1.7, 1.9, 4.4};  ///< h, w, l
  double base_yaw = 0.0;                ///< used while stationary
};

/// Seeded world description: everything an episode needs to replay exactly.
struct Scenario {
  std::uint64_t seed = 0;
  double duration = 60.0;
  double dt = 0.1;
  std::vector<AgentSpec> agents;
  std::vector<ObjectSpec> objects;
  std::optional<AttackSpec> attack;
  double comm_range = 500.0;
  DetectionNoise noise;
  double natural_fp_rate = 0.1;   ///< expected concurrent clutter per frame
  double natural_fn_prob = 0.05;  ///< per-object per-frame drop probability
  double clutter_persistence = 5.0;  ///< mean clutter lifetime, frames
  double nominal_height = 1.8;
  double world_extent = 400.0;
  Eigen::Matrix<double, 6, 1> camera_mount =
      Eigen::Matrix<double, 6, 1>::Zero();
};

/// Randomized-scenario generation parameters.
struct ScenarioConfig {
  int num_agents = 10;
  int num_objects = 20;
  double density = 1.0;  ///< fraction of agents activated per trial
  double duration = 60.0;
  double dt = 0.1;
  double world_extent = 400.0;
  double altitude_min = 80.0, altitude_max = 100.0;
  double agent_speed_min = 3.0, agent_speed_max = 8.0;
  double object_speed_min = 0.3, object_speed_max = 2.0;
  double object_stationary_prob = 0.3;
  CameraIntrinsics camera = CameraIntrinsics::centered(1920, 1080, 960, 960);
  double comm_range = 500.0;
  DetectionNoise noise;
  double natural_fp_rate = 0.1;
  double natural_fn_prob = 0.05;
  double clutter_persistence = 5.0;
  PriorLabel default_prior = PriorLabel::kNeutral;
  double nominal_height = 1.8;
  Eigen::Vector3d object_size_mean{1.7, 1.9, 4.4};
  Eigen::Vector3d object_size_spread{0.2, 0.3, 0.5};

  struct Attack {
    AttackSpec::Kind kind = AttackSpec::Kind::kFalsePositive;
    double attacked_fraction = 0.3;  ///< used when victims is empty
    std::vector<int> victims;        ///< explicit victim ids, optional
    double start_time = 5.0;
    double fp_rate = 3.0;
    double fn_prob = 0.5;
    Eigen::Vector3d translation_offset{5.0, 0.0, 0.0};
  };
  std::optional<Attack> attack;
};

/// Deterministic function of (config, seed): lays out agents and objects,
/// subsamples agents by density, and chooses attack victims. Throws
/// std::invalid_argument on infeasible configs.
Scenario generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

struct ObjectState {
  int id = -1;
  Box3D box;
};

/// Ground-truth object states at time t.
std::vector<ObjectState> object_states(const Scenario& scenario, double t);

AgentPose agent_pose(const AgentSpec& agent, double t);

/// Synthetic detector for one agent. Objects inside the camera view are
/// rendered to oriented pixel boxes, upscaled back through the ground
/// constraint, then perturbed with Gaussian noise; natural misses drop
/// detections and a persistent clutter pool contributes false positives
/// whose per-frame count is Poisson(natural_fp_rate) in steady state.
class SensorSim {
 public:
  SensorSim(const Scenario& scenario, const AgentSpec& agent, RngStream rng);

  std::vector<Detection> frame(const AgentPose& pose,
                               std::span<const ObjectState> objects, double t);

 private:
  struct Clutter {
    Box3D box;
  };

  std::optional<Detection> detect(const AgentPose& pose, const Box3D& truth,
                                  double t);

  const Scenario& scenario_;
  const AgentSpec& agent_;
  RngStream rng_;
  std::vector<Clutter> clutter_;
};

/// Per-frame record of everything observable in the episode.
struct AgentFrameLog {
  int agent_id = -1;
  AgentPose pose;
  FovFootprint footprint;
  std::vector<Detection> detections;
  std::vector<Track> local_tracks;  ///< confirmed
  std::vector<int> neighbors;
  int packets_received = 0;
  std::vector<FusedTrack> fused;
  TrustStore trust;
};

struct FrameLog {
  double t = 0.0;
  std::vector<ObjectState> truths;
  std::map<int, std::vector<Eigen::Vector2d>> fakes;  ///< victim -> positions
  std::vector<AgentFrameLog> agents;
};

class FrameObserver {
 public:
  virtual ~FrameObserver() = default;
  virtual void frame(const FrameLog& log) = 0;
};

struct PipelineOptions {
  bool trust_enabled = true;
  FusionMode fusion_mode = FusionMode::kTrustWeighted;
  TrustConfig trust;
  TrackerConfig tracker;
  DdfConfig ddf;
  /// Inner margin on footprints when predicting what an agent should have
  /// seen; absorbs objects only partially inside the camera view.
  double fov_trust_margin = 3.0;
};

/// Runs the full per-frame pipeline for every agent: sense, attack, track,
/// exchange packets over range-based connectivity, register, update trust,
/// fuse, filter. Deterministic given (scenario, options).
void run_episode(const Scenario& scenario, const PipelineOptions& options,
                 FrameObserver& observer);

/// Convenience overload collecting all frame logs; intended for small
/// scenarios (logs carry full covariances).
std::vector<FrameLog> run_episode(const Scenario& scenario,
                                  const PipelineOptions& options);

}  // namespace trustfuse

#endif  // TRUSTFUSE_SCENARIO_HPP
