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

#include <utility>
#include <vector>

#include "changedet/camera.hpp"
#include "changedet/types.hpp"

namespace changedet {

/// One pixel observation of a 3D point. The pixel may be homogeneous with any
/// nonzero scale; plain pixels use w = 1.
struct PixelObservation {
  Vec3 pixel_h = Vec3::UnitZ();
  ProjectionMatrix projection;

  PixelObservation(const Vec2& pixel, const ProjectionMatrix& p)
      : pixel_h(pixel.homogeneous()), projection(p) {}
  PixelObservation(const Vec3& pixel_homogeneous, const ProjectionMatrix& p)
      : pixel_h(pixel_homogeneous), projection(p) {}
};

/// Homogeneous linear system for multi-view triangulation: one 3-row block
/// skew(pixel) * P per observation.
struct TriangulationProblem {
  Eigen::Matrix<double, Eigen::Dynamic, 4> design;

  explicit TriangulationProblem(const std::vector<PixelObservation>& observations);
};

struct TriangulationResult {
  Vec3 point = Vec3::Zero();
  double residual = 0;  // smallest singular value of the design matrix
};

/// Solves design * X = 0 by SVD and dehomogenizes. Throws DegenerateGeometry
/// when the two smallest singular values are relatively closer than 1e-9
/// (depth unresolvable), and BehindCamera when the solution has non-positive
/// depth in any observing view.
TriangulationResult triangulate(const std::vector<PixelObservation>& observations);

}  // namespace changedet
