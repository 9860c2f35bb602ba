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

#include "changedet/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

constexpr int kMaxLeafSize = 4;

struct BuildPrim {
  int id;
  Vec3 centroid;
  Vec3 box_min;
  Vec3 box_max;
};

void grow(Vec3& lo, Vec3& hi, const Vec3& p) {
  lo = lo.cwiseMin(p);
  hi = hi.cwiseMax(p);
}

// Slab test against [t_min, t_limit]; returns entry distance when the ray
// overlaps the box in that range.
bool intersect_box(const Vec3& origin, const Vec3& inv_dir, const Vec3& lo, const Vec3& hi,
                   double t_min, double t_limit, double* t_entry) {
  double t0 = t_min;
  double t1 = t_limit;
  for (int axis = 0; axis < 3; ++axis) {
    double near = (lo[axis] - origin[axis]) * inv_dir[axis];
    double far = (hi[axis] - origin[axis]) * inv_dir[axis];
    if (inv_dir[axis] < 0.0) {
      std::swap(near, far);
    }
    if (std::isnan(near) || std::isnan(far)) {
      continue;  // ray parallel to slab and inside it
    }
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) {
      return false;
    }
  }
  *t_entry = t0;
  return true;
}

bool better_hit(double t, int id, double best_t, int best_id) {
  if (t < best_t - kHitTieEpsilon) {
    return true;
  }
  if (t > best_t + kHitTieEpsilon) {
    return false;
  }
  return id < best_id;
}

}  // namespace

std::optional<double> ray_triangle_intersect(const Vec3& origin, const Vec3& direction,
                                             const Vec3& a, const Vec3& b, const Vec3& c,
                                             double t_min) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pvec = direction.cross(e2);
  const double det = e1.dot(pvec);
  if (det == 0.0) {
    return std::nullopt;
  }
  const double inv_det = 1.0 / det;
  const Vec3 tvec = origin - a;
  const double u = tvec.dot(pvec) * inv_det;
  if (u < 0.0 || u > 1.0) {
    return std::nullopt;
  }
  const Vec3 qvec = tvec.cross(e1);
  const double v = direction.dot(qvec) * inv_det;
  if (v < 0.0 || u + v > 1.0) {
    return std::nullopt;
  }
  const double t = e2.dot(qvec) * inv_det;
  if (t < t_min) {
    return std::nullopt;
  }
  return t;
}

Bvh Bvh::build(const TriangleMesh& mesh) {
  if (mesh.triangles.empty()) {
    throw EmptyMesh("cannot build a BVH over an empty mesh");
  }

  const int n = static_cast<int>(mesh.triangles.size());
  std::vector<BuildPrim> prims(n);
  for (int i = 0; i < n; ++i) {
    BuildPrim& p = prims[i];
    p.id = i;
    p.box_min = Vec3::Constant(std::numeric_limits<double>::infinity());
    p.box_max = -p.box_min;
    for (int corner = 0; corner < 3; ++corner) {
      grow(p.box_min, p.box_max, mesh.vertex(i, corner));
    }
    p.centroid = 0.5 * (p.box_min + p.box_max);
  }

  Bvh bvh;
  bvh.nodes_.reserve(2 * n);

  // Iterative build over [begin, end) ranges of `prims`.
  struct Task {
    int node;
    int begin;
    int end;
  };
  std::vector<Task> stack;
  bvh.nodes_.push_back({});
  stack.push_back({0, 0, n});

  while (!stack.empty()) {
    const Task task = stack.back();
    stack.pop_back();

    Vec3 box_min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 box_max = -box_min;
    Vec3 cent_min = box_min;
    Vec3 cent_max = box_max;
    for (int i = task.begin; i < task.end; ++i) {
      grow(box_min, box_max, prims[i].box_min);
      grow(box_min, box_max, prims[i].box_max);
      grow(cent_min, cent_max, prims[i].centroid);
    }
    Node& node = bvh.nodes_[task.node];
    node.box_min = box_min;
    node.box_max = box_max;

    const int count = task.end - task.begin;
    if (count <= kMaxLeafSize) {
      node.first_prim = static_cast<int>(bvh.primitive_ids_.size());
      node.prim_count = count;
      for (int i = task.begin; i < task.end; ++i) {
        bvh.primitive_ids_.push_back(prims[i].id);
      }
      continue;
    }

    int axis = 0;
    const Vec3 extent = cent_max - cent_min;
    if (extent.y() > extent.x()) {
      axis = 1;
    }
    if (extent.z() > extent[axis]) {
      axis = 2;
    }

    const int mid = task.begin + count / 2;
    std::nth_element(prims.begin() + task.begin, prims.begin() + mid, prims.begin() + task.end,
                     [axis](const BuildPrim& a, const BuildPrim& b) {
                       if (a.centroid[axis] != b.centroid[axis]) {
                         return a.centroid[axis] < b.centroid[axis];
                       }
                       return a.id < b.id;
                     });

    const int left = static_cast<int>(bvh.nodes_.size());
    bvh.nodes_.push_back({});
    bvh.nodes_.push_back({});
    bvh.nodes_[task.node].left = left;
    bvh.nodes_[task.node].right = left + 1;
    // Push right first so the left child is processed next (stable layout).
    stack.push_back({left + 1, mid, task.end});
    stack.push_back({left, task.begin, mid});
  }

  return bvh;
}

std::optional<RayHit> Bvh::intersect(const TriangleMesh& mesh, const Ray& ray,
                                     double t_min) const {
  const Vec3 inv_dir = ray.direction.cwiseInverse();
  double best_t = std::numeric_limits<double>::infinity();
  int best_id = -1;

  int node_stack[64];
  int stack_size = 0;

  double t_entry;
  if (!intersect_box(ray.origin, inv_dir, nodes_[0].box_min, nodes_[0].box_max, t_min,
                     std::numeric_limits<double>::infinity(), &t_entry)) {
    return std::nullopt;
  }
  node_stack[stack_size++] = 0;

  while (stack_size > 0) {
    const Node& node = nodes_[node_stack[--stack_size]];

    if (node.prim_count > 0) {
      for (int i = 0; i < node.prim_count; ++i) {
        const int tri = primitive_ids_[node.first_prim + i];
        const auto t = ray_triangle_intersect(ray.origin, ray.direction, mesh.vertex(tri, 0),
                                              mesh.vertex(tri, 1), mesh.vertex(tri, 2), t_min);
        if (t && better_hit(*t, tri, best_t, best_id)) {
          best_t = *t;
          best_id = tri;
        }
      }
      continue;
    }

    // Visit the nearer child first; skip children that cannot beat or tie the
    // current best hit.
    const double prune_limit = best_id < 0 ? std::numeric_limits<double>::infinity()
                                           : best_t + kHitTieEpsilon;
    double t_left, t_right;
    const Node& lnode = nodes_[node.left];
    const Node& rnode = nodes_[node.right];
    const bool hit_left =
        intersect_box(ray.origin, inv_dir, lnode.box_min, lnode.box_max, t_min, prune_limit,
                      &t_left);
    const bool hit_right =
        intersect_box(ray.origin, inv_dir, rnode.box_min, rnode.box_max, t_min, prune_limit,
                      &t_right);
    if (hit_left && hit_right) {
      if (t_left <= t_right) {
        node_stack[stack_size++] = node.right;
        node_stack[stack_size++] = node.left;
      } else {
        node_stack[stack_size++] = node.left;
        node_stack[stack_size++] = node.right;
      }
    } else if (hit_left) {
      node_stack[stack_size++] = node.left;
    } else if (hit_right) {
      node_stack[stack_size++] = node.right;
    }
  }

  if (best_id < 0) {
    return std::nullopt;
  }
  return RayHit{ray.point_at(best_t), best_id, best_t};
}

}  // namespace changedet
