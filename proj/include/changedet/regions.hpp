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

#include <vector>

#include "changedet/types.hpp"

namespace changedet {

/// Connected pixel blob flagged as changed in one image. Mean and covariance
/// are the population moments of the member pixel coordinates.
struct ChangeRegion2D {
  Vec2 mean = Vec2::Zero();
  Mat2 covariance = Mat2::Zero();
  double area = 0;  // px^2 (member pixel count)
  int image_index = -1;
  std::vector<Eigen::Vector2i> pixels;
};

/// Localized 3D change: mean position with covariance, plus the image indices
/// that support it and the total pixel evidence.
struct ChangeRegion3D {
  Vec3 mean = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();
  std::vector<int> support;
  double pixel_area = 0;
};

}  // namespace changedet
