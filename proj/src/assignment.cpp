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
#include "trustfuse/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trustfuse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost assignment of every row of an nr x nc matrix (nr <= nc) by
// successive shortest augmenting paths on the reduced costs.
// Returns col4row; all entries valid on exit.
std::vector<int> lsap(const Eigen::MatrixXd& cost) {
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());

  std::vector<double> u(nr, 0.0), v(nc, 0.0), shortest(nc, 0.0);
  std::vector<int> path(nc, -1), col4row(nr, -1), row4col(nc, -1);
  std::vector<int> remaining(nc);
  std::vector<bool> in_sr(nr, false), in_sc(nc, false);

  for (int cur = 0; cur < nr; ++cur) {
    std::fill(shortest.begin(), shortest.end(), kInf);
    std::fill(in_sr.begin(), in_sr.end(), false);
    std::fill(in_sc.begin(), in_sc.end(), false);
    int num_remaining = nc;
    for (int j = 0; j < nc; ++j) remaining[j] = nc - 1 - j;

    double min_val = 0.0;
    int i = cur;
    int sink = -1;
    while (sink == -1) {
      in_sr[i] = true;
      int index = -1;
      double lowest = kInf;
      for (int k = 0; k < num_remaining; ++k) {
        const int j = remaining[k];
        const double r = min_val + cost(i, j) - u[i] - v[j];
        if (r < shortest[j]) {
          path[j] = i;
          shortest[j] = r;
        }
        if (shortest[j] < lowest ||
            (shortest[j] == lowest && row4col[j] == -1)) {
          lowest = shortest[j];
          index = k;
        }
      }
      min_val = lowest;
      if (!(min_val < kInf))
        throw std::runtime_error("solve_assignment: infeasible cost matrix");
      const int j = remaining[index];
      if (row4col[j] == -1)
        sink = j;
      else
        i = row4col[j];
      in_sc[j] = true;
      remaining[index] = remaining[--num_remaining];
    }

    u[cur] += min_val;
    for (int r = 0; r < nr; ++r) {
      if (in_sr[r] && r != cur) u[r] += min_val - shortest[col4row[r]];
    }
    for (int j = 0; j < nc; ++j) {
      if (in_sc[j]) v[j] -= min_val - shortest[j];
    }

    int j = sink;
    while (true) {
      const int r = path[j];
      row4col[j] = r;
      std::swap(col4row[r], j);
      if (r == cur) break;
    }
  }
  return col4row;
}

std::vector<Eigen::Vector2d> to_ccw_polygon(
    const std::array<Eigen::Vector2d, 4>& corners) {
  return {corners.begin(), corners.end()};
}

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double a = 0.0;
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return std::abs(a) / 2.0;
}

}  // namespace

double convex_intersection_area(const std::vector<Eigen::Vector2d>& p,
                                const std::vector<Eigen::Vector2d>& q) {
  // Clip p against each edge of q (q counterclockwise, interior on the left).
  std::vector<Eigen::Vector2d> poly = p, next;
  const int nq = static_cast<int>(q.size());
  for (int e = 0; e < nq && !poly.empty(); ++e) {
    const Eigen::Vector2d a = q[e];
    const Eigen::Vector2d b = q[(e + 1) % nq];
    const Eigen::Vector2d dir = b - a;
    next.clear();
    const int np = static_cast<int>(poly.size());
    for (int i = 0; i < np; ++i) {
      const Eigen::Vector2d& s = poly[i];
      const Eigen::Vector2d& t = poly[(i + 1) % np];
      const double side_s = dir.x() * (s.y() - a.y()) - dir.y() * (s.x() - a.x());
      const double side_t = dir.x() * (t.y() - a.y()) - dir.y() * (t.x() - a.x());
      const bool in_s = side_s >= -1e-12;
      const bool in_t = side_t >= -1e-12;
      if (in_s) next.push_back(s);
      if (in_s != in_t) {
        const double denom = side_s - side_t;
        if (std::abs(denom) > 0.0) {
          const double w = side_s / denom;
          next.push_back(s + w * (t - s));
        }
      }
    }
    poly.swap(next);
  }
  return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

double iou_bev(const Box3D& a, const Box3D& b) {
  const double area_a = a.bev_area();
  const double area_b = b.bev_area();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double inter = convex_intersection_area(to_ccw_polygon(a.bev_corners()),
                                                to_ccw_polygon(b.bev_corners()));
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

AssignmentResult solve_assignment(const Eigen::MatrixXd& cost, double gate) {
  AssignmentResult result;
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());
  if (nr == 0 || nc == 0) {
    for (int i = 0; i < nr; ++i) result.unmatched_rows.push_back(i);
    for (int j = 0; j < nc; ++j) result.unmatched_cols.push_back(j);
    return result;
  }
  if (!cost.allFinite())
    throw std::invalid_argument("solve_assignment: costs must be finite");

  // Forbidden entries are replaced by a uniform penalty large enough that
  // minimizing total cost first maximizes the number of gated matches. A
  // position-dependent epsilon steers equal-cost optima toward low indices.
  double max_abs = 0.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      if (cost(i, j) <= gate) max_abs = std::max(max_abs, std::abs(cost(i, j)));
  const double big = (max_abs + 1.0) * (nr + nc + 1);
  const double tie_eps =
      std::max(max_abs, 1.0) * 1e-12 / static_cast<double>(nr * nc);

  const bool transposed = nr > nc;
  const int rows = transposed ? nc : nr;
  const int cols = transposed ? nr : nc;
  Eigen::MatrixXd work(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int oi = transposed ? j : i;
      const int oj = transposed ? i : j;
      const double c = cost(oi, oj);
      work(i, j) = (c <= gate ? c : big) + tie_eps * (oi * nc + oj);
    }
  }

  const std::vector<int> col4row = lsap(work);

  std::vector<bool> row_matched(nr, false), col_matched(nc, false);
  for (int i = 0; i < rows; ++i) {
    const int j = col4row[i];
    const int oi = transposed ? j : i;
    const int oj = transposed ? i : j;
    if (cost(oi, oj) <= gate) {
      result.matches.push_back({oi, oj, cost(oi, oj)});
      row_matched[oi] = true;
      col_matched[oj] = true;
    }
  }
  std::sort(result.matches.begin(), result.matches.end(),
            [](const Assignment& a, const Assignment& b) {
              return a.row < b.row;
            });
  for (int i = 0; i < nr; ++i)
    if (!row_matched[i]) result.unmatched_rows.push_back(i);
  for (int j = 0; j < nc; ++j)
    if (!col_matched[j]) result.unmatched_cols.push_back(j);
  return result;
}

}  // namespace trustfuse
