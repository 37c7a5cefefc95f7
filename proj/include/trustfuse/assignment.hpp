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
#ifndef TRUSTFUSE_ASSIGNMENT_HPP
#define TRUSTFUSE_ASSIGNMENT_HPP

#include <Eigen/Core>
#include <vector>

#include "trustfuse/geometry.hpp"

namespace trustfuse {

struct Assignment {
  int row = -1;
  int col = -1;
  double cost = 0.0;
};

/// Gated bipartite matching outcome. Every row/column appears in exactly one
/// of matches / unmatched; every match cost is within the gate.
struct AssignmentResult {
  std::vector<Assignment> matches;
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;

  double total_cost() const {
    double s = 0.0;
    for (const auto& m : matches) s += m.cost;
    return s;
  }
};

/// Optimal gated assignment: among all matchings of maximum cardinality that
/// respect the gate (entries with cost > gate are forbidden), returns one of
/// minimum total cost. Solved with an O(n^3) shortest-augmenting-path scheme.
/// Ties between equal-cost optima are broken toward the lowest (row, col)
/// pairs so results are reproducible. An empty matrix yields an empty result.
AssignmentResult solve_assignment(const Eigen::MatrixXd& cost, double gate);

/// Intersection over union of the two boxes' ground-plane footprints.
/// Height overlap is ignored: every object of interest sits on the ground.
double iou_bev(const Box3D& a, const Box3D& b);

/// Area of the intersection of two convex polygons (counterclockwise
/// vertices), by Sutherland-Hodgman clipping.
double convex_intersection_area(const std::vector<Eigen::Vector2d>& p,
                                const std::vector<Eigen::Vector2d>& q);

}  // namespace trustfuse

#endif  // TRUSTFUSE_ASSIGNMENT_HPP
