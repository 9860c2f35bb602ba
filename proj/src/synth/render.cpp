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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "changedet/errors.hpp"
#include "changedet/parallel.hpp"
#include "changedet/synth/synthetic.hpp"

namespace changedet {

namespace {

constexpr double kCheckerContrast = 0.6;
constexpr std::uint8_t kDefaultAlbedo = 190;

// Checker parity over the two world axes spanning the surface. The dominant
// normal axis is excluded so axis-aligned faces (whose constant coordinate
// sits exactly on a cell boundary) stay stable.
bool checker_parity(const Vec3& point, const Vec3& normal, double cell) {
  int drop_axis = 0;
  double best = std::abs(normal.x());
  if (std::abs(normal.y()) > best) {
    drop_axis = 1;
    best = std::abs(normal.y());
  }
  if (std::abs(normal.z()) > best) {
    drop_axis = 2;
  }
  long long sum = 0;
  for (int axis = 0; axis < 3; ++axis) {
    if (axis == drop_axis) {
      continue;
    }
    sum += static_cast<long long>(std::floor(point[axis] / cell));
  }
  return (sum & 1) != 0;
}

void check_camera_inside(const TriangleMesh& mesh, const Pose& pose) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Vec3& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec3& c = pose.translation();
  for (int axis = 0; axis < 3; ++axis) {
    if (c[axis] <= lo[axis] || c[axis] >= hi[axis]) {
      throw CameraOutsideRoom("camera center outside the scene bounds");
    }
  }
}

}  // namespace

GrayImage render(const TriangleMesh& mesh, const Bvh& bvh, const CameraIntrinsics& intrinsics,
                 const Pose& pose, double texture_cell, double noise_sigma, std::uint64_t seed,
                 int threads) {
  check_camera_inside(mesh, pose);

  GrayImage img(intrinsics.width(), intrinsics.height(), 0);
  parallel_chunks(0, img.height, threads, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const Ray ray = back_project(intrinsics, pose, Vec2(x, y));
        const auto hit = bvh.intersect(mesh, ray);
        if (!hit) {
          continue;
        }
        const std::uint8_t albedo = mesh.albedo.empty()
                                        ? kDefaultAlbedo
                                        : mesh.albedo[hit->triangle_id];
        double value = albedo;
        if (checker_parity(hit->point, mesh.triangle_normal(hit->triangle_id), texture_cell)) {
          value *= kCheckerContrast;
        }
        img.at(x, y) = static_cast<std::uint8_t>(std::lround(value));
      }
    }
  });

  // Noise is drawn sequentially after shading so results do not depend on the
  // thread count.
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    for (std::uint8_t& value : img.data) {
      const double noisy = value + gauss(rng);
      value = static_cast<std::uint8_t>(std::lround(std::clamp(noisy, 0.0, 255.0)));
    }
  }
  return img;
}

DepthRender render_depth(const TriangleMesh& mesh, const Bvh& bvh,
                         const CameraIntrinsics& intrinsics, const Pose& pose, int threads) {
  DepthRender out;
  const std::size_t count =
      static_cast<std::size_t>(intrinsics.width()) * intrinsics.height();
  out.depth.assign(count, 0.0);
  out.hit.assign(count, 0);
  parallel_chunks(0, intrinsics.height(), threads, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < intrinsics.width(); ++x) {
        const Ray ray = back_project(intrinsics, pose, Vec2(x, y));
        if (const auto hit = bvh.intersect(mesh, ray)) {
          const std::size_t idx = static_cast<std::size_t>(y) * intrinsics.width() + x;
          out.depth[idx] = hit->t;
          out.hit[idx] = 1;
        }
      }
    }
  });
  return out;
}

}  // namespace changedet
