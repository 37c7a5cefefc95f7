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
#include "trustfuse/network.hpp"

#include <bit>
#include <cstring>

namespace trustfuse {

namespace {

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void f32(float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    out_.push_back(static_cast<std::uint8_t>(bits));
    out_.push_back(static_cast<std::uint8_t>(bits >> 8));
    out_.push_back(static_cast<std::uint8_t>(bits >> 16));
    out_.push_back(static_cast<std::uint8_t>(bits >> 24));
  }

  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }

  template <typename Mat>
  void matrix(const Mat& m) {  // row-major field order
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) f32(m(r, c));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  float f32() {
    need(4);
    std::uint32_t bits = bytes_[pos_] | (bytes_[pos_ + 1] << 8) |
                         (bytes_[pos_ + 2] << 16) |
                         (static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24);
    pos_ += 4;
    return std::bit_cast<float>(bits);
  }

  std::uint16_t u16() {
    need(2);
    std::uint16_t v =
        static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }

  template <typename Mat>
  void matrix(Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = f32();
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size())
      throw PacketDecodeError("packet truncated at byte " +
                                  std::to_string(bytes_.size()) + ", need " +
                                  std::to_string(kPacketBytes),
                              bytes_.size());
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_packet(const TrackPacket& p) {
  std::vector<std::uint8_t> out;
  out.reserve(kPacketBytes);
  Writer w(out);
  w.matrix(p.ownship_state);
  w.matrix(p.ownship_covariance);
  w.matrix(p.camera_mount);
  w.f32(p.hfov);
  w.f32(p.vfov);
  w.f32(p.focal_length);
  w.u16(p.image_width);
  w.u16(p.image_height);
  w.u16(p.track_id);
  w.matrix(p.track_state);
  w.matrix(p.track_covariance);
  return out;
}

TrackPacket decode_packet(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > kPacketBytes)
    throw PacketDecodeError(
        "packet oversized: " + std::to_string(bytes.size()) + " bytes, want " +
            std::to_string(kPacketBytes),
        kPacketBytes);
  Reader r(bytes);
  TrackPacket p;
  r.matrix(p.ownship_state);
  r.matrix(p.ownship_covariance);
  r.matrix(p.camera_mount);
  p.hfov = r.f32();
  p.vfov = r.f32();
  p.focal_length = r.f32();
  p.image_width = r.u16();
  p.image_height = r.u16();
  p.track_id = r.u16();
  r.matrix(p.track_state);
  r.matrix(p.track_covariance);
  return p;
}

Adjacency connectivity(std::span<const AgentPose> poses, double range) {
  const int n = static_cast<int>(poses.size());
  Adjacency adj = Adjacency::Constant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool connected =
          (poses[i].position - poses[j].position).norm() <= range;
      adj(i, j) = adj(j, i) = connected;
    }
  }
  return adj;
}

TrackPacket make_packet(const Track& track, const AgentPose& ownship,
                        const CameraIntrinsics& intrinsics,
                        const Eigen::Matrix<double, 6, 1>& camera_mount) {
  TrackPacket p;
  p.ownship_state << static_cast<float>(ownship.position.x()),
      static_cast<float>(ownship.position.y()),
      static_cast<float>(ownship.position.z()),
      static_cast<float>(ownship.yaw), static_cast<float>(ownship.pitch),
      static_cast<float>(ownship.roll);
  p.ownship_covariance = ownship.covariance.cast<float>();
  p.camera_mount = camera_mount.cast<float>();
  const auto [hfov, vfov] = camera_half_angles(intrinsics);
  p.hfov = static_cast<float>(hfov);
  p.vfov = static_cast<float>(vfov);
  p.focal_length = static_cast<float>(intrinsics.fx);
  p.image_width = static_cast<std::uint16_t>(intrinsics.nx);
  p.image_height = static_cast<std::uint16_t>(intrinsics.ny);
  p.track_id = static_cast<std::uint16_t>(track.id);

  p.track_state.segment<3>(0) = track.position().cast<float>();
  p.track_state.segment<3>(3) = track.velocity().cast<float>();
  p.track_state(6) = static_cast<float>(track.yaw());

  Eigen::Matrix<double, 7, 7> cov;
  constexpr int idx[7] = {0, 1, 2, 3, 4, 5, 9};
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) cov(i, j) = track.covariance(idx[i], idx[j]);
  p.track_covariance = cov.cast<float>();
  return p;
}

Track track_from_packet(const TrackPacket& packet, int source_agent,
                        double timestamp, const Eigen::Vector3d& default_size,
                        double default_size_var) {
  Track t;
  t.id = packet.track_id;
  t.source_agent = source_agent;
  t.status = TrackStatus::kConfirmed;
  t.last_update = timestamp;

  const Eigen::Matrix<double, 7, 1> state =
      packet.track_state.cast<double>();
  t.state.segment<3>(0) = state.segment<3>(0);
  t.state.segment<3>(3) = state.segment<3>(3);
  t.state.segment<3>(6) = default_size;
  t.state(9) = wrap_angle(state(6));

  Eigen::Matrix<double, 7, 7> cov = packet.track_covariance.cast<double>();
  cov = ((cov + cov.transpose()) / 2.0).eval();  // exact sym survives f32; guard anyway
  t.covariance.setZero();
  constexpr int idx[7] = {0, 1, 2, 3, 4, 5, 9};
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) t.covariance(idx[i], idx[j]) = cov(i, j);
  t.covariance.block<3, 3>(6, 6) =
      Eigen::Matrix3d::Identity() * default_size_var;
  return t;
}

}  // namespace trustfuse
