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
#include "trustfuse/geometry.hpp"

#include <stdexcept>

namespace trustfuse {

namespace {

Eigen::Matrix2d rot2(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

}  // namespace

std::array<Eigen::Vector2d, 4> FovFootprint::corners() const {
  const Eigen::Matrix2d r = rot2(yaw);
  std::array<Eigen::Vector2d, 4> out;
  const double ex = half_extent_x, ey = half_extent_y;
  const Eigen::Vector2d local[4] = {{ex, ey}, {-ex, ey}, {-ex, -ey}, {ex, -ey}};
  for (int i = 0; i < 4; ++i) out[i] = center + r * local[i];
  return out;
}

std::array<Eigen::Vector2d, 4> Box3D::bev_corners() const {
  const Eigen::Matrix2d r = rot2(yaw);
  const double hl = length / 2.0, hw = width / 2.0;
  std::array<Eigen::Vector2d, 4> out;
  const Eigen::Vector2d local[4] = {{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}};
  for (int i = 0; i < 4; ++i)
    out[i] = center.head<2>() + r * local[i];
  return out;
}

std::array<Eigen::Vector2d, 4> PixelBox::corners() const {
  const Eigen::Matrix2d r = rot2(angle);
  const double eu = half_extent_u, ev = half_extent_v;
  std::array<Eigen::Vector2d, 4> out;
  const Eigen::Vector2d local[4] = {{eu, ev}, {-eu, ev}, {-eu, -ev}, {eu, -ev}};
  for (int i = 0; i < 4; ++i) out[i] = Eigen::Vector2d(u, v) + r * local[i];
  return out;
}

bool PixelBox::inside_image(const CameraIntrinsics& intr) const {
  for (const auto& c : corners()) {
    if (c.x() < 0.0 || c.x() > intr.nx || c.y() < 0.0 || c.y() > intr.ny)
      return false;
  }
  return true;
}

std::pair<double, double> camera_half_angles(const CameraIntrinsics& intr) {
  const double dtheta = std::atan(intr.nx / (2.0 * intr.fx));
  const double dphi = std::atan(intr.ny / (2.0 * intr.fy));
  return {dtheta, dphi};
}

FovFootprint fov_footprint(const AgentPose& pose,
                           const CameraIntrinsics& intr) {
  const double z = pose.position.z();
  if (z <= 0.0)
    throw std::domain_error("fov_footprint: non-positive altitude");
  const auto [dtheta, dphi] = camera_half_angles(intr);
  FovFootprint f;
  f.center = pose.position.head<2>();
  f.half_extent_x = z * std::tan(dtheta);
  f.half_extent_y = z * std::tan(dphi);
  f.yaw = pose.yaw;
  return f;
}

Eigen::Vector3d pixel_to_ground(const AgentPose& pose,
                                const CameraIntrinsics& intr,
                                const Eigen::Vector2d& pixel) {
  const double z = pose.position.z();
  if (z <= 0.0)
    throw std::domain_error("pixel_to_ground: non-positive altitude");
  if (pixel.x() < 0.0 || pixel.x() > intr.nx || pixel.y() < 0.0 ||
      pixel.y() > intr.ny)
    throw std::domain_error("pixel_to_ground: pixel outside image bounds");
  const double ox = z * (pixel.x() - intr.cx) / intr.fx;
  const double oy = z * (pixel.y() - intr.cy) / intr.fy;
  const Eigen::Vector2d world_xy =
      pose.position.head<2>() + rot2(pose.yaw) * Eigen::Vector2d(ox, oy);
  return Eigen::Vector3d(world_xy.x(), world_xy.y(), 0.0);
}

Eigen::Vector2d ground_to_pixel(const AgentPose& pose,
                                const CameraIntrinsics& intr,
                                const Eigen::Vector3d& point) {
  const double z = pose.position.z();
  if (z <= 0.0)
    throw std::domain_error("ground_to_pixel: non-positive altitude");
  const Eigen::Vector2d local =
      rot2(pose.yaw).transpose() * (point.head<2>() - pose.position.head<2>());
  return Eigen::Vector2d(intr.cx + intr.fx * local.x() / z,
                         intr.cy + intr.fy * local.y() / z);
}

Box3D upscale_box(const AgentPose& pose, const CameraIntrinsics& intr,
                  const PixelBox& bbox, double nominal_height) {
  if (bbox.area() <= 0.0)
    throw std::domain_error("upscale_box: degenerate pixel box");
  if (!bbox.inside_image(intr))
    throw std::domain_error("upscale_box: pixel box not fully inside image");

  const Eigen::Vector3d center_g =
      pixel_to_ground(pose, intr, Eigen::Vector2d(bbox.u, bbox.v));
  const auto px_corners = bbox.corners();
  std::array<Eigen::Vector2d, 4> g;
  for (int i = 0; i < 4; ++i)
    g[i] = pixel_to_ground(pose, intr, px_corners[i]).head<2>();

  // Corner layout matches PixelBox::corners(): edge 0-1 spans the length
  // axis, edge 0-3 the width axis.
  const Eigen::Vector2d len_edge = g[0] - g[1];
  const Eigen::Vector2d wid_edge = g[0] - g[3];

  Box3D box;
  box.center = Eigen::Vector3d(center_g.x(), center_g.y(), nominal_height / 2.0);
  box.length = len_edge.norm();
  box.width = wid_edge.norm();
  box.height = nominal_height;
  box.yaw = wrap_angle(std::atan2(len_edge.y(), len_edge.x()));
  return box;
}

PixelBox project_box(const AgentPose& pose, const CameraIntrinsics& intr,
                     const Box3D& box) {
  const double z = pose.position.z();
  if (z <= 0.0)
    throw std::domain_error("project_box: non-positive altitude");

  // Project the footprint center and the two half-edge vectors; the pixel
  // box is the image of the ground rectangle under the (anisotropic) linear
  // pixel map, described by its principal axis.
  const Eigen::Vector2d local =
      rot2(pose.yaw).transpose() *
      (box.center.head<2>() - pose.position.head<2>());
  const Eigen::Matrix2d scale =
      Eigen::Vector2d(intr.fx / z, intr.fy / z).asDiagonal();
  const Eigen::Matrix2d to_px = scale * rot2(pose.yaw).transpose();

  const Eigen::Matrix2d rb = rot2(box.yaw);
  const Eigen::Vector2d half_len_px = to_px * (rb * Eigen::Vector2d(box.length / 2.0, 0.0));
  const Eigen::Vector2d half_wid_px = to_px * (rb * Eigen::Vector2d(0.0, box.width / 2.0));

  PixelBox px;
  px.u = intr.cx + intr.fx * local.x() / z;
  px.v = intr.cy + intr.fy * local.y() / z;
  px.half_extent_u = half_len_px.norm();
  px.half_extent_v = half_wid_px.norm();
  px.angle = std::atan2(half_len_px.y(), half_len_px.x());
  return px;
}

}  // namespace trustfuse
