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

#include "trustfuse/attack.hpp"

using namespace trustfuse;

namespace {

std::vector<Detection> sample_dets(int count, double t) {
  std::vector<Detection> dets;
  for (int i = 0; i < count; ++i) {
    Detection d;
    d.box.center = Eigen::Vector3d(3.0 * i, -2.0 * i, 0.85);
    d.box.height = 1.7;
    d.box.width = 1.9;
    d.box.length = 4.4;
    d.timestamp = t;
    d.source_agent = 1;
    dets.push_back(d);
  }
  return dets;
}

FovFootprint footprint_at(double x, double y) {
  FovFootprint f;
  f.center = Eigen::Vector2d(x, y);
  f.half_extent_x = 80.0;
  f.half_extent_y = 50.0;
  f.yaw = 0.3;
  return f;
}

AttackSpec fp_spec(double rate, double start = 0.0) {
  AttackSpec spec;
  spec.kind = AttackSpec::Kind::kFalsePositive;
  spec.victims = {1};
  spec.start_time = start;
  spec.fp_rate = rate;
  return spec;
}

}  // namespace

TEST_CASE("attacks respect the start time and victim set") {
  Attacker attacker(fp_spec(3.0, 5.0), DetectionNoise{});
  RngStream rng(1);
  const auto dets = sample_dets(4, 1.0);

  const auto before =
      attacker.apply(dets, 1, footprint_at(0, 0), 1.0, rng);
  CHECK(before.size() == dets.size());

  const auto non_victim =
      attacker.apply(dets, 2, footprint_at(0, 0), 10.0, rng);
  CHECK(non_victim.size() == dets.size());

  const auto after = attacker.apply(dets, 1, footprint_at(0, 0), 6.0, rng);
  CHECK(after.size() >= dets.size());
}

TEST_CASE("false negative attack drops detections") {
  AttackSpec spec;
  spec.kind = AttackSpec::Kind::kFalseNegative;
  spec.victims = {1};
  spec.fn_prob = 1.0;
  Attacker attacker(spec, DetectionNoise{});
  RngStream rng(2);
  CHECK(attacker.apply(sample_dets(5, 0.0), 1, footprint_at(0, 0), 0.0, rng)
            .empty());

  spec.fn_prob = 0.5;
  Attacker half(spec, DetectionNoise{});
  int kept = 0;
  const int frames = 2000;
  for (int f = 0; f < frames; ++f)
    kept += static_cast<int>(
        half.apply(sample_dets(1, 0.0), 1, footprint_at(0, 0), 0.0, rng)
            .size());
  CHECK(kept > frames * 0.45);
  CHECK(kept < frames * 0.55);
}

TEST_CASE("translation attack shifts every detection") {
  AttackSpec spec;
  spec.kind = AttackSpec::Kind::kTranslation;
  spec.victims = {1};
  spec.translation_offset = Eigen::Vector3d(5.0, 0.0, 0.0);
  Attacker attacker(spec, DetectionNoise{});
  RngStream rng(3);
  const auto dets = sample_dets(3, 0.0);
  const auto out = attacker.apply(dets, 1, footprint_at(0, 0), 0.0, rng);
  REQUIRE(out.size() == dets.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK((out[i].box.center - dets[i].box.center -
           Eigen::Vector3d(5, 0, 0))
              .norm() < 1e-12);
  }
}

TEST_CASE("false positive injection statistics") {
  // fp_rate = 2 over 1000 frames: the mean injected count per frame lands
  // near 2 (Poisson sample mean).
  Attacker attacker(fp_spec(2.0), DetectionNoise{});
  RngStream rng(42);
  const auto footprint = footprint_at(10, -5);
  long injected = 0;
  const int frames = 1000;
  for (int f = 0; f < frames; ++f) {
    const auto out = attacker.apply({}, 1, footprint, 0.1 * f, rng);
    injected += static_cast<long>(out.size());
  }
  const double mean = static_cast<double>(injected) / frames;
  CHECK(mean > 1.8);
  CHECK(mean < 2.2);
}

TEST_CASE("fakes persist with stable identities inside the footprint") {
  Attacker attacker(fp_spec(3.0), DetectionNoise{});
  RngStream rng(7);
  const auto footprint = footprint_at(0, 0);

  // Count how often the same fake position (up to sensor noise) reappears.
  std::vector<Eigen::Vector2d> first_frame;
  attacker.apply({}, 1, footprint, 0.0, rng);
  first_frame = attacker.active_fakes(1);
  REQUIRE(!first_frame.empty());
  int reappearances = 0;
  const int frames = 50;
  for (int f = 1; f < frames; ++f) {
    attacker.apply({}, 1, footprint, 0.1 * f, rng);
    for (const auto& fake : attacker.active_fakes(1)) {
      if ((fake - first_frame[0]).norm() < 1e-9) {
        ++reappearances;
        break;
      }
    }
  }
  // The first-spawned fake is re-presented whenever the Poisson draw is
  // nonzero: nearly every frame at rate 3.
  CHECK(reappearances > frames * 3 / 4);

  SUBCASE("every injected fake lies inside the footprint") {
    for (int f = 0; f < 20; ++f) {
      attacker.apply({}, 1, footprint, 10.0 + 0.1 * f, rng);
      for (const auto& fake : attacker.active_fakes(1))
        CHECK(footprint.contains(fake));
    }
  }
}

TEST_CASE("attack streams are deterministic") {
  const auto dets = sample_dets(3, 0.0);
  auto run = [&] {
    Attacker attacker(fp_spec(3.0), DetectionNoise{});
    RngStream rng = RngStream::derive(99, "attack", 1);
    std::vector<double> xs;
    for (int f = 0; f < 30; ++f) {
      const auto out =
          attacker.apply(dets, 1, footprint_at(0, 0), 0.1 * f, rng);
      for (const auto& d : out) xs.push_back(d.box.center.x());
    }
    return xs;
  };
  CHECK(run() == run());
}
