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
#include "trustfuse/tracking.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

#include "trustfuse/assignment.hpp"

namespace trustfuse {

StateMatrix cv_transition(double dt) {
  StateMatrix f = StateMatrix::Identity();
  f(0, 3) = f(1, 4) = f(2, 5) = dt;
  return f;
}

StateMatrix process_noise(double dt, const TrackerConfig& cfg) {
  StateMatrix q = StateMatrix::Zero();
  const double d3 = dt * dt * dt / 3.0;
  const double d2 = dt * dt / 2.0;
  for (int i = 0; i < 3; ++i) {
    q(i, i) = cfg.q_accel * d3;
    q(i, i + 3) = q(i + 3, i) = cfg.q_accel * d2;
    q(i + 3, i + 3) = cfg.q_accel * dt;
  }
  for (int i = 6; i < 9; ++i) q(i, i) = cfg.q_size * dt;
  q(9, 9) = cfg.q_yaw * dt;
  return q;
}

Eigen::Matrix<double, kMeasDim, kStateDim> measurement_matrix() {
  Eigen::Matrix<double, kMeasDim, kStateDim> h;
  h.setZero();
  h(0, 0) = h(1, 1) = h(2, 2) = 1.0;  // position
  h(3, 6) = h(4, 7) = h(5, 8) = 1.0;  // size
  h(6, 9) = 1.0;                      // yaw
  return h;
}

Track predict(const Track& track, double dt, const TrackerConfig& cfg) {
  if (dt < 0.0) throw std::domain_error("predict: negative dt");
  Track out = track;
  const StateMatrix f = cv_transition(dt);
  out.state = f * track.state;
  out.state(9) = wrap_angle(out.state(9));
  out.covariance = f * track.covariance * f.transpose() + process_noise(dt, cfg);
  out.covariance = ((out.covariance + out.covariance.transpose()) / 2.0).eval();
  return out;
}

Track kalman_update(const Track& track, const Detection& det) {
  static const Eigen::Matrix<double, kMeasDim, kStateDim> h =
      measurement_matrix();

  MeasVector innovation = det.measurement() - h * track.state;
  innovation(6) = wrap_angle(innovation(6));

  const MeasMatrix s =
      h * track.covariance * h.transpose() + det.covariance;
  Eigen::LLT<MeasMatrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("kalman_update: singular innovation covariance");

  const Eigen::Matrix<double, kStateDim, kMeasDim> gain =
      llt.solve(h * track.covariance).transpose();

  Track out = track;
  out.state = track.state + gain * innovation;
  out.state(9) = wrap_angle(out.state(9));

  // Joseph form keeps the posterior covariance symmetric PSD.
  const StateMatrix ikh = StateMatrix::Identity() - gain * h;
  out.covariance = ikh * track.covariance * ikh.transpose() +
                   gain * det.covariance * gain.transpose();
  out.covariance = ((out.covariance + out.covariance.transpose()) / 2.0).eval();
  out.last_update = det.timestamp;
  return out;
}

Track MultiTargetTracker::spawn(const Detection& det, double timestamp) {
  Track t;
  t.id = next_id_++;
  t.source_agent = agent_id_;
  t.status = TrackStatus::kTentative;
  t.hits = 1;
  t.frames_alive = 1;
  t.last_update = timestamp;

  const MeasVector z = det.measurement();
  t.state.segment<3>(0) = z.segment<3>(0);
  t.state.segment<3>(3).setZero();
  t.state.segment<3>(6) = z.segment<3>(3);
  t.state(9) = wrap_angle(z(6));

  t.covariance.setZero();
  t.covariance.block<3, 3>(0, 0) = det.covariance.block<3, 3>(0, 0);
  t.covariance.block<3, 3>(3, 3) =
      Eigen::Matrix3d::Identity() * cfg_.init_velocity_var;
  t.covariance.block<3, 3>(6, 6) = det.covariance.block<3, 3>(3, 3);
  t.covariance(9, 9) = det.covariance(6, 6);
  return t;
}

void MultiTargetTracker::step(const std::vector<Detection>& detections,
                              double timestamp) {
  const double dt = started_ ? timestamp - last_time_ : 0.0;
  started_ = true;
  last_time_ = timestamp;

  for (auto& t : tracks_) t = predict(t, dt, cfg_);

  const int nt = static_cast<int>(tracks_.size());
  const int nd = static_cast<int>(detections.size());
  Eigen::MatrixXd cost(nt, nd);
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nd; ++j)
      cost(i, j) = 1.0 - iou_bev(tracks_[i].box(), detections[j].box);

  const AssignmentResult assoc = solve_assignment(cost, 1.0 - cfg_.min_iou);

  std::vector<bool> track_hit(nt, false);
  for (const auto& m : assoc.matches) {
    try {
      tracks_[m.row] = kalman_update(tracks_[m.row], detections[m.col]);
      track_hit[m.row] = true;
    } catch (const std::runtime_error&) {
      // Numerically unusable update; count it as a miss.
    }
  }

  for (int i = 0; i < nt; ++i) {
    Track& t = tracks_[i];
    ++t.frames_alive;
    if (track_hit[i]) {
      ++t.hits;
      t.consecutive_misses = 0;
    } else {
      ++t.misses;
      ++t.consecutive_misses;
    }
    if (t.status == TrackStatus::kTentative) {
      if (t.hits >= cfg_.confirm_hits && t.frames_alive <= cfg_.confirm_window)
        t.status = TrackStatus::kConfirmed;
      else if (t.frames_alive > cfg_.confirm_window)
        t.status = TrackStatus::kDeleted;
    }
    if (t.consecutive_misses >= cfg_.delete_misses)
      t.status = TrackStatus::kDeleted;
  }

  for (int j : assoc.unmatched_cols) tracks_.push_back(spawn(detections[j], timestamp));

  std::erase_if(tracks_,
                [](const Track& t) { return t.status == TrackStatus::kDeleted; });
}

std::vector<Track> MultiTargetTracker::confirmed() const {
  std::vector<Track> out;
  for (const auto& t : tracks_)
    if (t.status == TrackStatus::kConfirmed) out.push_back(t);
  return out;
}

}  // namespace trustfuse
