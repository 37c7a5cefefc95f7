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
#ifndef TRUSTFUSE_GEOMETRY_HPP
#define TRUSTFUSE_GEOMETRY_HPP

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <utility>

namespace trustfuse {

// World frame convention: East-North-Up, ground plane z = 0. Yaw is measured
// counterclockwise from East. Cameras are gimbaled and downward facing with
// both image axes parallel to the ground plane: pixel +u maps to the platform
// yaw direction, pixel +v to its left-orthogonal.

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

/// Pinhole camera parameters in pixels. Principal point defaults to the
/// image center.
struct CameraIntrinsics {
  double fx = 0.0;  ///< focal length, horizontal (px)
  double fy = 0.0;  ///< focal length, vertical (px)
  double nx = 0.0;  ///< image width (px)
  double ny = 0.0;  ///< image height (px)
  double cx = 0.0;  ///< principal point u (px)
  double cy = 0.0;  ///< principal point v (px)

  static CameraIntrinsics centered(double nx, double ny, double fx, double fy) {
    return CameraIntrinsics{fx, fy, nx, ny, nx / 2.0, ny / 2.0};
  }

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && nx >= 1.0 && ny >= 1.0 && cx >= 0.0 &&
           cx <= nx && cy >= 0.0 && cy <= ny;
  }
};

/// Platform pose: position in the world frame plus yaw/pitch/roll and a 6x6
/// covariance over the position and orientation states.
struct AgentPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  Eigen::Matrix<double, 6, 6> covariance = Eigen::Matrix<double, 6, 6>::Zero();
};

/// Oriented rectangle on the ground plane observable by a camera.
struct FovFootprint {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double half_extent_x = 0.0;  ///< along the yaw axis (m)
  double half_extent_y = 0.0;  ///< orthogonal (m)
  double yaw = 0.0;

  double area() const { return 4.0 * half_extent_x * half_extent_y; }

  /// True if the ground point lies inside (or on the boundary of) the
  /// rectangle.
  bool contains(const Eigen::Vector2d& p) const {
    const double c = std::cos(yaw), s = std::sin(yaw);
    const Eigen::Vector2d d = p - center;
    const double lx = c * d.x() + s * d.y();
    const double ly = -s * d.x() + c * d.y();
    return std::abs(lx) <= half_extent_x && std::abs(ly) <= half_extent_y;
  }

  /// Rectangle shrunk inward by `margin` meters on every side (extents are
  /// floored at zero, giving an empty footprint).
  FovFootprint shrunk(double margin) const {
    FovFootprint f = *this;
    f.half_extent_x = std::max(0.0, half_extent_x - margin);
    f.half_extent_y = std::max(0.0, half_extent_y - margin);
    return f;
  }

  std::array<Eigen::Vector2d, 4> corners() const;
};

/// Axis-oriented 3D bounding box: center, size (height, width, length) and
/// yaw of the length axis. h, w, l > 0; yaw in (-pi, pi].
struct Box3D {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double height = 0.0;
  double width = 0.0;
  double length = 0.0;
  double yaw = 0.0;

  double bev_area() const { return width * length; }

  /// Ground-plane footprint corners, counterclockwise.
  std::array<Eigen::Vector2d, 4> bev_corners() const;
};

/// Oriented rectangle in pixel coordinates, as emitted by the synthetic
/// detector: center (u, v), half extents along the box axes, and in-image
/// rotation angle.
struct PixelBox {
  double u = 0.0;
  double v = 0.0;
  double half_extent_u = 0.0;  ///< along the box length axis (px)
  double half_extent_v = 0.0;  ///< along the box width axis (px)
  double angle = 0.0;          ///< pixel-frame rotation (rad)

  double area() const { return 4.0 * half_extent_u * half_extent_v; }
  std::array<Eigen::Vector2d, 4> corners() const;
  bool inside_image(const CameraIntrinsics& intr) const;
};

/// Half-angles of the camera field of view: horizontal and vertical.
std::pair<double, double> camera_half_angles(const CameraIntrinsics& intr);

/// Ground-plane footprint observable from the given pose. Throws
/// std::domain_error for non-positive altitude.
FovFootprint fov_footprint(const AgentPose& pose, const CameraIntrinsics& intr);

/// Intersects the ray through a pixel with the ground plane z = 0. The pixel
/// must be inside the image bounds and the platform above the ground; throws
/// std::domain_error otherwise.
Eigen::Vector3d pixel_to_ground(const AgentPose& pose,
                                const CameraIntrinsics& intr,
                                const Eigen::Vector2d& pixel);

/// Inverse of pixel_to_ground for points on the ground plane.
Eigen::Vector2d ground_to_pixel(const AgentPose& pose,
                                const CameraIntrinsics& intr,
                                const Eigen::Vector3d& point);

/// Lifts an oriented pixel-space detection to a 3D box under the
/// ground-object constraint. The box footprint comes from projecting the
/// pixel box corners to the ground; height is the configured nominal since a
/// nadir camera does not observe it. Throws std::domain_error on a
/// degenerate (zero-area) or out-of-image pixel box.
Box3D upscale_box(const AgentPose& pose, const CameraIntrinsics& intr,
                  const PixelBox& bbox, double nominal_height);

/// Forward rendering used by the synthetic detector and by tests: projects a
/// ground box footprint into an oriented pixel box.
PixelBox project_box(const AgentPose& pose, const CameraIntrinsics& intr,
                     const Box3D& box);

}  // namespace trustfuse

#endif  // TRUSTFUSE_GEOMETRY_HPP
