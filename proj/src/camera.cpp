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

#include "changedet/camera.hpp"

#include "changedet/errors.hpp"

namespace changedet {

CameraIntrinsics::CameraIntrinsics(double fx, double fy, double cx, double cy, int width,
                                   int height)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), width_(width), height_(height) {
  if (!(fx_ > 0.0) || !(fy_ > 0.0)) {
    throw InvalidIntrinsics("focal lengths must be positive");
  }
  if (width_ <= 0 || height_ <= 0) {
    throw InvalidIntrinsics("raster dimensions must be positive");
  }
  if (!(cx_ >= 0.0 && cx_ < width_) || !(cy_ >= 0.0 && cy_ < height_)) {
    throw InvalidIntrinsics("principal point must lie inside the raster");
  }
}

Mat3 CameraIntrinsics::matrix() const {
  Mat3 k = Mat3::Identity();
  k(0, 0) = fx_;
  k(1, 1) = fy_;
  k(0, 2) = cx_;
  k(1, 2) = cy_;
  return k;
}

Mat3 CameraIntrinsics::inverse_matrix() const {
  Mat3 k = Mat3::Identity();
  k(0, 0) = 1.0 / fx_;
  k(1, 1) = 1.0 / fy_;
  k(0, 2) = -cx_ / fx_;
  k(1, 2) = -cy_ / fy_;
  return k;
}

ProjectionMatrix::ProjectionMatrix(const CameraIntrinsics& intrinsics, const Pose& world_T_cam) {
  // P = K * R_cw * [I | -c] with R_cw the world-to-camera rotation and c the
  // camera center. The last row of K is (0,0,1), so P*[X;1] carries depth in
  // its third coordinate.
  const Mat3 r_cw = world_T_cam.rotation().transpose();
  Mat34 rt;
  rt.leftCols<3>() = r_cw;
  rt.col(3) = -(r_cw * world_T_cam.translation());
  m_ = intrinsics.matrix() * rt;
}

ProjectionMatrix projection_matrix(const CameraIntrinsics& intrinsics, const Pose& world_T_cam) {
  return ProjectionMatrix(intrinsics, world_T_cam);
}

std::optional<ProjectedPoint> project(const ProjectionMatrix& p, const Vec3& world_point) {
  const Vec3 h = p.matrix() * world_point.homogeneous();
  if (!(h.z() > 0.0)) {
    return std::nullopt;
  }
  return ProjectedPoint{Vec2(h.x() / h.z(), h.y() / h.z()), h.z()};
}

Ray back_project(const CameraIntrinsics& intrinsics, const Pose& world_T_cam, const Vec2& pixel) {
  const Vec3 dir_cam((pixel.x() - intrinsics.cx()) / intrinsics.fx(),
                     (pixel.y() - intrinsics.cy()) / intrinsics.fy(), 1.0);
  return Ray{world_T_cam.translation(), (world_T_cam.rotation() * dir_cam).normalized()};
}

}  // namespace changedet
