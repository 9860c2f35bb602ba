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

// Independent reference implementations used as test oracles. Everything here
// is written from first principles and must stay decoupled from the library
// code paths it checks.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "changedet/mesh.hpp"
#include "changedet/pose.hpp"

namespace oracles {

using changedet::Mat3;
using changedet::Mat4;
using changedet::TriangleMesh;
using changedet::Vec2;
using changedet::Vec3;

// ---------------------------------------------------------------------------
// Dense homogeneous-matrix pose oracle.

inline Mat4 pose_to_mat4(const changedet::Pose& p) {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = p.rotation();
  m.topRightCorner<3, 1>() = p.translation();
  return m;
}

// ---------------------------------------------------------------------------
// Component-wise cross product.

inline Vec3 cross_oracle(const Vec3& a, const Vec3& b) {
  return Vec3(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
              a.x() * b.y() - a.y() * b.x());
}

// ---------------------------------------------------------------------------
// Randomness helpers (fixed-seed callers).

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  while (q.norm() < 1e-6) {
    q = Eigen::Quaterniond(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  }
  q.normalize();
  return q.toRotationMatrix();
}

inline Vec3 random_vec3(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> uniform(-scale, scale);
  return Vec3(uniform(rng), uniform(rng), uniform(rng));
}

inline TriangleMesh random_triangle_soup(std::mt19937_64& rng, int count, double domain,
                                         double max_edge) {
  TriangleMesh mesh;
  std::uniform_real_distribution<double> position(-domain, domain);
  std::uniform_real_distribution<double> edge(-max_edge, max_edge);
  while (static_cast<int>(mesh.triangles.size()) < count) {
    const Vec3 a(position(rng), position(rng), position(rng));
    const Vec3 b = a + Vec3(edge(rng), edge(rng), edge(rng));
    const Vec3 c = a + Vec3(edge(rng), edge(rng), edge(rng));
    if (0.5 * (b - a).cross(c - a).norm() <= 1e-9) {
      continue;
    }
    const int base = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(a);
    mesh.vertices.push_back(b);
    mesh.vertices.push_back(c);
    mesh.triangles.push_back({base, base + 1, base + 2});
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Brute-force nearest ray/mesh intersection with the lower-id tie rule.
// Scalar Moller-Trumbore, written out component by component.

struct BruteHit {
  int triangle_id = -1;
  double t = std::numeric_limits<double>::infinity();
};

inline std::optional<double> brute_triangle_t(const Vec3& o, const Vec3& d, const Vec3& v0,
                                              const Vec3& v1, const Vec3& v2, double t_min) {
  const double e1x = v1.x() - v0.x(), e1y = v1.y() - v0.y(), e1z = v1.z() - v0.z();
  const double e2x = v2.x() - v0.x(), e2y = v2.y() - v0.y(), e2z = v2.z() - v0.z();
  const double px = d.y() * e2z - d.z() * e2y;
  const double py = d.z() * e2x - d.x() * e2z;
  const double pz = d.x() * e2y - d.y() * e2x;
  const double det = e1x * px + e1y * py + e1z * pz;
  if (det == 0.0) {
    return std::nullopt;
  }
  const double inv = 1.0 / det;
  const double tx = o.x() - v0.x(), ty = o.y() - v0.y(), tz = o.z() - v0.z();
  const double u = (tx * px + ty * py + tz * pz) * inv;
  if (u < 0.0 || u > 1.0) {
    return std::nullopt;
  }
  const double qx = ty * e1z - tz * e1y;
  const double qy = tz * e1x - tx * e1z;
  const double qz = tx * e1y - ty * e1x;
  const double v = (d.x() * qx + d.y() * qy + d.z() * qz) * inv;
  if (v < 0.0 || u + v > 1.0) {
    return std::nullopt;
  }
  const double t = (e2x * qx + e2y * qy + e2z * qz) * inv;
  if (t < t_min) {
    return std::nullopt;
  }
  return t;
}

inline std::optional<BruteHit> brute_force_intersect(const TriangleMesh& mesh, const Vec3& origin,
                                                     const Vec3& direction, double t_min,
                                                     double tie_eps = 1e-12) {
  BruteHit best;
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
    const auto t = brute_triangle_t(origin, direction, mesh.vertex(i, 0), mesh.vertex(i, 1),
                                    mesh.vertex(i, 2), t_min);
    if (!t) {
      continue;
    }
    if (*t < best.t - tie_eps || (*t <= best.t + tie_eps && i < best.triangle_id)) {
      if (*t < best.t) {
        best.t = *t;
      }
      best.triangle_id = i;
    }
  }
  if (best.triangle_id < 0) {
    return std::nullopt;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Discrete-uniform moments of a solid axis-aligned block of pixels.

inline double uniform_block_variance(int side) {
  return (static_cast<double>(side) * side - 1.0) / 12.0;
}

}  // namespace oracles
