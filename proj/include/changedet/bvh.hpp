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
#include <vector>

#include "changedet/camera.hpp"
#include "changedet/mesh.hpp"
#include "changedet/types.hpp"

namespace changedet {

/// Minimum hit distance; keeps a surface from shadowing itself when rays
/// start on geometry.
constexpr double kRayEpsilon = 1e-6;

/// Hits closer than this along the ray count as simultaneous; the lower
/// triangle id wins.
constexpr double kHitTieEpsilon = 1e-12;

struct RayHit {
  Vec3 point;
  int triangle_id = -1;
  double t = 0;  // meters along the ray
};

/// Axis-aligned bounding-box tree over triangle indices. Median split along
/// the longest centroid axis, at most 4 triangles per leaf. Immutable after
/// construction and safe to share across threads.
class Bvh {
 public:
  /// Throws EmptyMesh when the mesh has no triangles.
  static Bvh build(const TriangleMesh& mesh);

  /// Nearest intersection at t >= t_min, or nullopt when the ray escapes.
  /// Equal-t hits (within kHitTieEpsilon) resolve to the lower triangle id.
  std::optional<RayHit> intersect(const TriangleMesh& mesh, const Ray& ray,
                                  double t_min = kRayEpsilon) const;

  struct Node {
    Vec3 box_min;
    Vec3 box_max;
    int left = -1;        // internal: child node indices
    int right = -1;
    int first_prim = -1;  // leaf: range into primitive_ids_
    int prim_count = 0;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& primitive_ids() const { return primitive_ids_; }

 private:
  std::vector<Node> nodes_;
  std::vector<int> primitive_ids_;
};

/// Nearest hit of `ray` against `mesh`, accelerated by `bvh`.
inline std::optional<RayHit> ray_mesh_intersect(const Bvh& bvh, const TriangleMesh& mesh,
                                                const Ray& ray, double t_min = kRayEpsilon) {
  return bvh.intersect(mesh, ray, t_min);
}

/// Moller-Trumbore ray/triangle test; returns t or nullopt. No backface culling.
std::optional<double> ray_triangle_intersect(const Vec3& origin, const Vec3& direction,
                                             const Vec3& a, const Vec3& b, const Vec3& c,
                                             double t_min);

}  // namespace changedet
