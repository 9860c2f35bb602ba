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

#include "changedet/mesh.hpp"

namespace changedet {

double TriangleMesh::triangle_area(int tri) const {
  const Vec3& a = vertex(tri, 0);
  const Vec3& b = vertex(tri, 1);
  const Vec3& c = vertex(tri, 2);
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 TriangleMesh::triangle_normal(int tri) const {
  const Vec3& a = vertex(tri, 0);
  const Vec3& b = vertex(tri, 1);
  const Vec3& c = vertex(tri, 2);
  return (b - a).cross(c - a).normalized();
}

void TriangleMesh::remove_degenerate_triangles() {
  const bool has_albedo = !albedo.empty();
  std::vector<std::array<int, 3>> kept;
  std::vector<std::uint8_t> kept_albedo;
  kept.reserve(triangles.size());
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    if (triangle_area(static_cast<int>(i)) > kMinTriangleArea) {
      kept.push_back(triangles[i]);
      if (has_albedo) {
        kept_albedo.push_back(albedo[i]);
      }
    }
  }
  triangles = std::move(kept);
  albedo = std::move(kept_albedo);
}

}  // namespace changedet
