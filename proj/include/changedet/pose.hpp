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

#include "changedet/types.hpp"

namespace changedet {

/// Rigid transform. For a camera pose, `rotation` maps camera-frame vectors
/// into the world frame and `translation` is the camera center in world
/// coordinates, i.e. x_world = R * x_cam + t.
class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

  /// Throws NotARotation unless R is orthonormal with det +1 (tolerance 1e-9).
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return Pose(); }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 transform(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 inverse_transform(const Vec3& p) const { return rotation_.transpose() * (p - translation_); }

  Mat4 matrix() const;

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

/// Product of two rigid transforms, e.g. world_T_cam = world_T_body * body_T_cam.
Pose compose(const Pose& a, const Pose& b);

Pose inverse(const Pose& p);

/// True when R'R is within `tol` of identity (max-abs) and det(R) within `tol` of +1.
bool is_rotation(const Mat3& r, double tol);

/// Nearest rotation matrix in the Frobenius sense (via SVD).
Mat3 orthonormalize_rotation(const Mat3& r);

}  // namespace changedet
