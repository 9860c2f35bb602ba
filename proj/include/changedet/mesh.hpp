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

#include <array>
#include <cstdint>
#include <vector>

#include "changedet/types.hpp"

namespace changedet {

constexpr double kMinTriangleArea = 1e-12;  // m^2, degenerate below this

/// Indexed triangle soup. `albedo` is per-triangle 8-bit intensity used by the
/// synthetic renderer; it may be empty for real-world meshes.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> albedo;

  const Vec3& vertex(int tri, int corner) const { return vertices[triangles[tri][corner]]; }

  double triangle_area(int tri) const;
  Vec3 triangle_normal(int tri) const;  // unit length

  /// Removes triangles with area <= kMinTriangleArea, keeping albedo in sync.
  void remove_degenerate_triangles();
};

}  // namespace changedet
