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

#include "support/oracles.hpp"
#include "trustfuse/assignment.hpp"

using namespace trustfuse;

namespace {

Box3D box_at(double x, double y, double w, double l, double yaw = 0.0) {
  Box3D b;
  b.center = Eigen::Vector3d(x, y, 0.5);
  b.height = 1.0;
  b.width = w;
  b.length = l;
  b.yaw = yaw;
  return b;
}

}  // namespace

TEST_CASE("iou closed-form cases") {
  const Box3D unit = box_at(0, 0, 1, 1);
  CHECK(iou_bev(unit, unit) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(iou_bev(unit, box_at(5, 5, 1, 1)) == 0.0);

  // Two unit squares offset by half along x: overlap 0.5, union 1.5.
  CHECK(iou_bev(unit, box_at(0.5, 0, 1, 1)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("iou symmetry, range, and rigid invariance") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> dim(0.5, 4.0);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int i = 0; i < 300; ++i) {
    const Box3D a = box_at(pos(gen), pos(gen), dim(gen), dim(gen), ang(gen));
    const Box3D b = box_at(pos(gen), pos(gen), dim(gen), dim(gen), ang(gen));
    const double ab = iou_bev(a, b);
    CHECK(ab == doctest::Approx(iou_bev(b, a)).epsilon(1e-9));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);

    // Apply one rigid transform to both boxes.
    const double phi = ang(gen);
    const Eigen::Vector2d shift(pos(gen), pos(gen));
    auto moved = [&](const Box3D& in) {
      Box3D out = in;
      const Eigen::Matrix2d r{{std::cos(phi), -std::sin(phi)},
                              {std::sin(phi), std::cos(phi)}};
      out.center.head<2>() = (r * in.center.head<2>() + shift).eval();
      out.yaw = wrap_angle(in.yaw + phi);
      return out;
    };
    CHECK(iou_bev(moved(a), moved(b)) == doctest::Approx(ab).epsilon(1e-7));
  }
}

TEST_CASE("assignment basics") {
  SUBCASE("single pair") {
    Eigen::MatrixXd cost(1, 1);
    cost << 0.0;
    const AssignmentResult r = solve_assignment(cost, 1.0);
    REQUIRE(r.matches.size() == 1);
    CHECK(r.matches[0].row == 0);
    CHECK(r.matches[0].col == 0);
    CHECK(r.unmatched_rows.empty());
    CHECK(r.unmatched_cols.empty());
  }

  SUBCASE("diagonal dominance") {
    Eigen::MatrixXd cost(2, 2);
    cost << 0.1, 0.9, 0.9, 0.1;
    const AssignmentResult r = solve_assignment(cost, 0.5);
    REQUIRE(r.matches.size() == 2);
    CHECK(r.matches[0].col == 0);
    CHECK(r.matches[1].col == 1);
    CHECK(r.total_cost() == doctest::Approx(0.2));
  }

  SUBCASE("empty matrix is an empty result") {
    const AssignmentResult r = solve_assignment(Eigen::MatrixXd(0, 0), 1.0);
    CHECK(r.matches.empty());
    CHECK(r.unmatched_rows.empty());
    CHECK(r.unmatched_cols.empty());

    const AssignmentResult rows_only =
        solve_assignment(Eigen::MatrixXd::Zero(3, 0), 1.0);
    CHECK(rows_only.matches.empty());
    CHECK(rows_only.unmatched_rows.size() == 3);
  }

  SUBCASE("gate forbids expensive matches") {
    Eigen::MatrixXd cost(2, 2);
    cost << 0.2, 5.0, 5.0, 5.0;
    const AssignmentResult r = solve_assignment(cost, 1.0);
    REQUIRE(r.matches.size() == 1);
    CHECK(r.matches[0].row == 0);
    CHECK(r.matches[0].col == 0);
    CHECK(r.unmatched_rows == std::vector<int>{1});
    CHECK(r.unmatched_cols == std::vector<int>{1});
  }

  SUBCASE("result partitions rows and columns") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd cost(4, 6);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) cost(i, j) = u(gen);
    const AssignmentResult r = solve_assignment(cost, 0.7);
    std::vector<bool> row_seen(4, false), col_seen(6, false);
    for (const auto& m : r.matches) {
      CHECK(!row_seen[m.row]);
      CHECK(!col_seen[m.col]);
      CHECK(m.cost <= 0.7);
      row_seen[m.row] = true;
      col_seen[m.col] = true;
    }
    for (int i : r.unmatched_rows) {
      CHECK(!row_seen[i]);
      row_seen[i] = true;
    }
    for (int j : r.unmatched_cols) {
      CHECK(!col_seen[j]);
      col_seen[j] = true;
    }
    for (bool s : row_seen) CHECK(s);
    for (bool s : col_seen) CHECK(s);
  }
}

TEST_CASE("assignment matches the exhaustive oracle") {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 6);

  // Random 5x5 instances without gating: optimal total equals the minimum
  // over all 120 permutations.
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::MatrixXd cost(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) cost(i, j) = u(gen);
    const AssignmentResult r = solve_assignment(cost, 10.0);
    const auto oracle = testing::brute_force_assignment(cost, 10.0);
    CHECK(static_cast<int>(r.matches.size()) == oracle.cardinality);
    CHECK(r.total_cost() == doctest::Approx(oracle.cost).epsilon(1e-9));
  }

  // Rectangular gated instances up to 6x6: cardinality is maximal and cost
  // minimal among maximal matchings.
  for (int iter = 0; iter < 200; ++iter) {
    const int nr = dim(gen), nc = dim(gen);
    Eigen::MatrixXd cost(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) cost(i, j) = u(gen);
    const double gate = 0.25 + 0.5 * u(gen);
    const AssignmentResult r = solve_assignment(cost, gate);
    const auto oracle = testing::brute_force_assignment(cost, gate);
    CHECK(static_cast<int>(r.matches.size()) == oracle.cardinality);
    CHECK(r.total_cost() == doctest::Approx(oracle.cost).epsilon(1e-9));
  }
}

TEST_CASE("raising the gate never loses matches") {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::MatrixXd cost(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) cost(i, j) = u(gen);
    std::size_t previous = 0;
    for (double gate : {0.1, 0.3, 0.5, 0.7, 0.9, 1.1}) {
      const std::size_t count = solve_assignment(cost, gate).matches.size();
      CHECK(count >= previous);
      previous = count;
    }
  }
}

TEST_CASE("assignment is deterministic under ties") {
  Eigen::MatrixXd cost(3, 3);
  cost.setConstant(0.5);
  const AssignmentResult a = solve_assignment(cost, 1.0);
  const AssignmentResult b = solve_assignment(cost, 1.0);
  REQUIRE(a.matches.size() == b.matches.size());
  for (std::size_t i = 0; i < a.matches.size(); ++i) {
    CHECK(a.matches[i].row == b.matches[i].row);
    CHECK(a.matches[i].col == b.matches[i].col);
  }
  // The low-index bias picks the identity pairing among equal optima.
  for (std::size_t i = 0; i < a.matches.size(); ++i)
    CHECK(a.matches[i].row == a.matches[i].col);
}
