// Copyright 2026 The changedet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>

#include "changedet/pose.hpp"
#include "changedet/types.hpp"

namespace changedet {

/// Pinhole calibration, zero skew, no distortion. Pixel convention: x right,
/// y down, origin at the top-left pixel center.
class CameraIntrinsics {
 public:
  /// Throws InvalidIntrinsics unless fx,fy > 0 and the principal point lies
  /// inside the raster.
  CameraIntrinsics(double fx, double fy, double cx, double cy, int width, int height);

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }
  int width() const { return width_; }
  int height() const { return height_; }

  Mat3 matrix() const;
  Mat3 inverse_matrix() const;

 private:
  double fx_, fy_, cx_, cy_;
  int width_, height_;
};

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length

  Vec3 point_at(double t) const { return origin + t * direction; }
};

struct ProjectedPoint {
  Vec2 pixel;
  double depth = 0;  // signed distance along the optical axis
};

/// 3x4 matrix mapping homogeneous world points to homogeneous pixels. Built
/// from intrinsics and a world-from-camera pose; the scale is fixed so that
/// the third row of P*[X;1] is the signed optical-axis depth.
class ProjectionMatrix {
 public:
  ProjectionMatrix(const CameraIntrinsics& intrinsics, const Pose& world_T_cam);

  const Mat34& matrix() const { return m_; }

 private:
  Mat34 m_;
};

ProjectionMatrix projection_matrix(const CameraIntrinsics& intrinsics, const Pose& world_T_cam);

/// Dehomogenized pixel and depth of a world point, or nullopt when the point
/// lies at or behind the camera plane (depth <= 0).
std::optional<ProjectedPoint> project(const ProjectionMatrix& p, const Vec3& world_point);

/// World-frame ray through a (sub-)pixel, origin at the camera center.
Ray back_project(const CameraIntrinsics& intrinsics, const Pose& world_T_cam, const Vec2& pixel);

}  // namespace changedet
