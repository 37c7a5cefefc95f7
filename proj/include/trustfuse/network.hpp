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
#ifndef TRUSTFUSE_NETWORK_HPP
#define TRUSTFUSE_NETWORK_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "trustfuse/geometry.hpp"
#include "trustfuse/tracking.hpp"

namespace trustfuse {

/// Inter-agent message carrying one track plus the sender's pose and camera
/// model. Every numeric field is 32-bit on the wire; the three integer
/// fields are 16-bit unsigned, little-endian throughout. One packet per
/// track: the ownship/camera header is replicated so each packet stands
/// alone.
struct TrackPacket {
  Eigen::Matrix<float, 6, 1> ownship_state =
      Eigen::Matrix<float, 6, 1>::Zero();  ///< [p_x p_y p_z yaw pitch roll]
  Eigen::Matrix<float, 6, 6> ownship_covariance =
      Eigen::Matrix<float, 6, 6>::Zero();
  Eigen::Matrix<float, 6, 1> camera_mount =
      Eigen::Matrix<float, 6, 1>::Zero();  ///< camera pose on platform, fixed
  float hfov = 0.0f;                       ///< horizontal FOV half-angle (rad)
  float vfov = 0.0f;                       ///< vertical FOV half-angle (rad)
  float focal_length = 0.0f;               ///< px
  std::uint16_t image_width = 0;
  std::uint16_t image_height = 0;
  std::uint16_t track_id = 0;
  Eigen::Matrix<float, 7, 1> track_state =
      Eigen::Matrix<float, 7, 1>::Zero();  ///< [p(3) v(3) theta]
  Eigen::Matrix<float, 7, 7> track_covariance =
      Eigen::Matrix<float, 7, 7>::Zero();
};

// 107 floats and 3 uint16s.
inline constexpr std::size_t kPacketFloats = 42 + 6 + 3 + 56;
inline constexpr std::size_t kPacketBytes = kPacketFloats * 4 + 3 * 2;

class PacketDecodeError : public std::runtime_error {
 public:
  PacketDecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), byte_offset(offset) {}
  std::size_t byte_offset;
};

std::vector<std::uint8_t> encode_packet(const TrackPacket& packet);

/// Exact inverse of encode_packet. Throws PacketDecodeError (with the byte
/// offset where parsing stopped) on truncated or oversized buffers.
TrackPacket decode_packet(std::span<const std::uint8_t> bytes);

/// Packet size accounting. The paper mode reproduces the published 3448-bit
/// figure, which implies 8-bit integers; the wire format uses 16-bit
/// integers (an 8-bit field cannot hold HD image dimensions), giving 3472.
enum class PacketAccounting { kPaper, kWire };

constexpr int packet_size_bits(PacketAccounting accounting) {
  return static_cast<int>(kPacketFloats) * 32 +
         3 * (accounting == PacketAccounting::kPaper ? 8 : 16);
}

/// Symmetric range-based connectivity; indices follow the pose span.
using Adjacency = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
Adjacency connectivity(std::span<const AgentPose> poses, double range);

/// Builds the wire message for one confirmed track.
TrackPacket make_packet(const Track& track, const AgentPose& ownship,
                        const CameraIntrinsics& intrinsics,
                        const Eigen::Matrix<double, 6, 1>& camera_mount);

/// Reconstructs a Track from a received packet. Size states are not
/// transmitted; they are filled with the provided default at low confidence.
Track track_from_packet(const TrackPacket& packet, int source_agent,
                        double timestamp, const Eigen::Vector3d& default_size,
                        double default_size_var);

}  // namespace trustfuse

#endif  // TRUSTFUSE_NETWORK_HPP
