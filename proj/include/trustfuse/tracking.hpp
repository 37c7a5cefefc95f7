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
#ifndef TRUSTFUSE_TRACKING_HPP
#define TRUSTFUSE_TRACKING_HPP

#include <Eigen/Core>
#include <vector>

#include "trustfuse/geometry.hpp"

namespace trustfuse {

// Kalman state layout: [p_x p_y p_z v_x v_y v_z h w l theta].
inline constexpr int kStateDim = 10;
// Measured block: position, size, yaw (velocity is inferred, never observed).
inline constexpr int kMeasDim = 7;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;
using MeasVector = Eigen::Matrix<double, kMeasDim, 1>;
using MeasMatrix = Eigen::Matrix<double, kMeasDim, kMeasDim>;

/// Per-axis standard deviations of the synthetic detector, shared by the
/// scenario simulator and the attack models (an insider mimics the natural
/// sensor statistics).
struct DetectionNoise {
  double sigma_pos = 0.5;   ///< m, each position axis
  double sigma_size = 0.2;  ///< m, each size axis
  double sigma_yaw = 0.1;   ///< rad

  MeasMatrix covariance() const {
    MeasVector d;
    d << sigma_pos * sigma_pos, sigma_pos * sigma_pos, sigma_pos * sigma_pos,
        sigma_size * sigma_size, sigma_size * sigma_size,
        sigma_size * sigma_size, sigma_yaw * sigma_yaw;
    return d.asDiagonal();
  }
};

struct Detection {
  Box3D box;
  MeasMatrix covariance = MeasMatrix::Identity();
  double timestamp = 0.0;
  int source_agent = -1;

  MeasVector measurement() const {
    MeasVector z;
    z << box.center, box.height, box.width, box.length, box.yaw;
    return z;
  }
};

enum class TrackStatus { kTentative, kConfirmed, kDeleted };

struct Track {
  int id = -1;
  StateVector state = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Zero();
  int hits = 0;
  int misses = 0;
  int consecutive_misses = 0;
  int frames_alive = 0;
  TrackStatus status = TrackStatus::kTentative;
  double last_update = 0.0;
  int source_agent = -1;

  Eigen::Vector3d position() const { return state.segment<3>(0); }
  Eigen::Vector3d velocity() const { return state.segment<3>(3); }
  Eigen::Vector3d size() const { return state.segment<3>(6); }
  double yaw() const { return state(9); }

  Box3D box() const {
    return Box3D{position(), state(6), state(7), state(8), state(9)};
  }
};

struct TrackerConfig {
  double q_accel = 1.0;   ///< white-noise acceleration density (m^2/s^3)
  double q_size = 0.01;   ///< size random walk density (m^2/s)
  double q_yaw = 0.01;    ///< yaw random walk density (rad^2/s)
  double min_iou = 0.1;   ///< association gate: matches need IoU >= min_iou
  int confirm_hits = 3;
  int confirm_window = 5;
  int delete_misses = 4;
  double init_velocity_var = 100.0;  ///< m^2/s^2, velocity unobserved at birth
};

/// Constant-velocity transition matrix for a dt-second step.
StateMatrix cv_transition(double dt);

/// Process noise: white-noise acceleration on position/velocity, independent
/// random walks on size and yaw.
StateMatrix process_noise(double dt, const TrackerConfig& cfg);

/// Measurement matrix selecting [p, h, w, l, theta] from the state.
Eigen::Matrix<double, kMeasDim, kStateDim> measurement_matrix();

/// Constant-velocity prediction. Throws std::domain_error for negative dt.
Track predict(const Track& track, double dt, const TrackerConfig& cfg);

/// Linear measurement update with yaw innovation wrapping. Throws
/// std::runtime_error if the innovation covariance is not invertible; the
/// tracker treats that as a missed update.
Track kalman_update(const Track& track, const Detection& det);

/// Per-agent multi-target tracker: predict, IoU-gated assignment, update,
/// and M-of-N lifecycle management. Track ids are never reused.
class MultiTargetTracker {
 public:
  MultiTargetTracker(const TrackerConfig& cfg, int agent_id)
      : cfg_(cfg), agent_id_(agent_id) {}

  /// Advances to `timestamp` and folds in one frame of detections (all
  /// sharing that timestamp).
  void step(const std::vector<Detection>& detections, double timestamp);

  /// Live tracks (tentative and confirmed).
  const std::vector<Track>& tracks() const { return tracks_; }

  std::vector<Track> confirmed() const;

  const TrackerConfig& config() const { return cfg_; }
  int agent_id() const { return agent_id_; }

 private:
  Track spawn(const Detection& det, double timestamp);

  TrackerConfig cfg_;
  int agent_id_;
  std::vector<Track> tracks_;
  int next_id_ = 0;
  double last_time_ = 0.0;
  bool started_ = false;
};

}  // namespace trustfuse

#endif  // TRUSTFUSE_TRACKING_HPP
