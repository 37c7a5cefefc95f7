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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "trustfuse/network.hpp"

using namespace trustfuse;

namespace {

TrackPacket random_packet(std::mt19937_64& gen) {
  std::uniform_real_distribution<float> u(-100.0f, 100.0f);
  std::uniform_int_distribution<int> ui(0, 65535);
  TrackPacket p;
  for (int i = 0; i < 6; ++i) p.ownship_state(i) = u(gen);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) p.ownship_covariance(i, j) = u(gen);
  for (int i = 0; i < 6; ++i) p.camera_mount(i) = u(gen);
  p.hfov = u(gen);
  p.vfov = u(gen);
  p.focal_length = u(gen);
  p.image_width = static_cast<std::uint16_t>(ui(gen));
  p.image_height = static_cast<std::uint16_t>(ui(gen));
  p.track_id = static_cast<std::uint16_t>(ui(gen));
  for (int i = 0; i < 7; ++i) p.track_state(i) = u(gen);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) p.track_covariance(i, j) = u(gen);
  return p;
}

bool packets_equal(const TrackPacket& a, const TrackPacket& b) {
  return a.ownship_state == b.ownship_state &&
         a.ownship_covariance == b.ownship_covariance &&
         a.camera_mount == b.camera_mount && a.hfov == b.hfov &&
         a.vfov == b.vfov && a.focal_length == b.focal_length &&
         a.image_width == b.image_width && a.image_height == b.image_height &&
         a.track_id == b.track_id && a.track_state == b.track_state &&
         a.track_covariance == b.track_covariance;
}

AgentPose pose_at(double x, double y, double z) {
  AgentPose p;
  p.position = Eigen::Vector3d(x, y, z);
  return p;
}

}  // namespace

TEST_CASE("packet size accounting") {
  // The published accounting assumes 8-bit integers; the wire uses 16-bit.
  CHECK(packet_size_bits(PacketAccounting::kPaper) == 3448);
  CHECK(packet_size_bits(PacketAccounting::kWire) == 3472);
  CHECK(kPacketFloats == 107);
  CHECK(kPacketBytes == 434);
  // At the 10 Hz transmission rate this stays under 35 Kbps.
  CHECK(packet_size_bits(PacketAccounting::kPaper) * 10 < 35000);
}

TEST_CASE("encode length and zero round trip") {
  const TrackPacket zero;
  const auto bytes = encode_packet(zero);
  CHECK(bytes.size() == 434);
  CHECK(packets_equal(decode_packet(bytes), zero));
}

TEST_CASE("random packets round trip exactly") {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 2000; ++i) {
    const TrackPacket p = random_packet(gen);
    const auto bytes = encode_packet(p);
    REQUIRE(bytes.size() == kPacketBytes);
    CHECK(packets_equal(decode_packet(bytes), p));
  }
}

TEST_CASE("wire layout is little-endian with the documented field order") {
  TrackPacket p;
  p.ownship_state(0) = 1.0f;  // 0x3f800000
  p.image_width = 0x0102;
  const auto bytes = encode_packet(p);
  CHECK(bytes[0] == 0x00);
  CHECK(bytes[1] == 0x00);
  CHECK(bytes[2] == 0x80);
  CHECK(bytes[3] == 0x3f);
  // Integers start after the 51 leading floats.
  const std::size_t int_offset = (42 + 6 + 3) * 4;
  CHECK(bytes[int_offset] == 0x02);
  CHECK(bytes[int_offset + 1] == 0x01);
}

TEST_CASE("decode rejects malformed buffers with a byte offset") {
  const auto bytes = encode_packet(TrackPacket{});

  auto truncated = std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 10);
  try {
    decode_packet(truncated);
    FAIL("expected PacketDecodeError");
  } catch (const PacketDecodeError& e) {
    CHECK(e.byte_offset == truncated.size());
  }

  auto oversized = bytes;
  oversized.push_back(0);
  try {
    decode_packet(oversized);
    FAIL("expected PacketDecodeError");
  } catch (const PacketDecodeError& e) {
    CHECK(e.byte_offset == kPacketBytes);
  }
}

TEST_CASE("track conversion preserves the transmitted block") {
  Track t;
  t.id = 12;
  t.state << 1, 2, 0.9, 0.5, -0.25, 0, 1.7, 1.9, 4.4, 0.77;
  t.covariance = StateMatrix::Identity() * 0.25;
  t.status = TrackStatus::kConfirmed;

  const AgentPose pose = pose_at(10, 20, 90);
  const CameraIntrinsics intr = CameraIntrinsics::centered(1920, 1080, 960, 960);
  const TrackPacket packet =
      make_packet(t, pose, intr, Eigen::Matrix<double, 6, 1>::Zero());
  CHECK(packet.track_id == 12);
  CHECK(packet.image_width == 1920);
  CHECK(packet.image_height == 1080);
  CHECK(packet.hfov == doctest::Approx(M_PI / 4.0));

  const Track back =
      track_from_packet(packet, 3, 1.5, Eigen::Vector3d(1.8, 2.0, 4.5), 4.0);
  CHECK(back.id == 12);
  CHECK(back.source_agent == 3);
  CHECK((back.position() - t.position()).norm() < 1e-5);
  CHECK((back.velocity() - t.velocity()).norm() < 1e-6);
  CHECK(back.yaw() == doctest::Approx(0.77).epsilon(1e-6));
  // Size is not transmitted; the default fills in.
  CHECK(back.size() == Eigen::Vector3d(1.8, 2.0, 4.5));
  CHECK(back.covariance(6, 6) == 4.0);
  CHECK(back.covariance(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("connectivity") {
  SUBCASE("two agents within range connect") {
    std::vector<AgentPose> poses = {pose_at(0, 0, 90), pose_at(10, 0, 90)};
    const Adjacency adj = connectivity(poses, 100.0);
    CHECK(adj(0, 1));
    CHECK(adj(1, 0));
    CHECK(!adj(0, 0));
  }

  SUBCASE("vanishing range disconnects distinct positions") {
    std::vector<AgentPose> poses = {pose_at(0, 0, 90), pose_at(1, 0, 90)};
    const Adjacency adj = connectivity(poses, 1e-6);
    CHECK(!adj(0, 1));
  }

  SUBCASE("matches the pairwise brute force on random layouts") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    std::vector<AgentPose> poses;
    for (int i = 0; i < 20; ++i)
      poses.push_back(pose_at(u(gen), u(gen), 80.0 + u(gen) / 10.0));
    const double range = 150.0;
    const Adjacency adj = connectivity(poses, range);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const bool expected =
            i != j &&
            (poses[i].position - poses[j].position).norm() <= range;
        CHECK(adj(i, j) == expected);
      }
    }
  }

  SUBCASE("growing range never removes edges") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    std::vector<AgentPose> poses;
    for (int i = 0; i < 12; ++i) poses.push_back(pose_at(u(gen), u(gen), 90));
    Adjacency previous = connectivity(poses, 50.0);
    for (double range : {100.0, 200.0, 400.0}) {
      const Adjacency next = connectivity(poses, range);
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
          if (previous(i, j)) CHECK(next(i, j));
      previous = next;
    }
  }
}
