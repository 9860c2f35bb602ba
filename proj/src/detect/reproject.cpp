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

#include "changedet/detect/reproject.hpp"

#include <cmath>

#include "changedet/parallel.hpp"

namespace changedet {

namespace {
constexpr double kOcclusionTol = 0.01;  // m of second-cast distance disagreement
}

ViewGeometry compute_view_geometry(const TriangleMesh& mesh, const Bvh& bvh,
                                   const CameraIntrinsics& intrinsics, const Pose& pose,
                                   int threads) {
  ViewGeometry geom;
  geom.width = intrinsics.width();
  geom.height = intrinsics.height();
  geom.ray_t.assign(static_cast<std::size_t>(geom.width) * geom.height, 0.0);
  geom.hit.assign(geom.ray_t.size(), 0);

  parallel_chunks(0, geom.height, threads, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < geom.width; ++x) {
        const Ray ray = back_project(intrinsics, pose, Vec2(x, y));
        if (const auto hit = bvh.intersect(mesh, ray)) {
          const std::size_t idx = static_cast<std::size_t>(y) * geom.width + x;
          geom.ray_t[idx] = hit->t;
          geom.hit[idx] = 1;
        }
      }
    }
  });
  return geom;
}

WarpedImage reproject_with_geometry(const GrayImage& src, const Pose& src_pose,
                                    const ViewGeometry& dst_geometry, const Pose& dst_pose,
                                    const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                                    const Bvh& bvh, int threads) {
  const int width = dst_geometry.width;
  const int height = dst_geometry.height;
  WarpedImage warped;
  warped.image = GrayImage(width, height, 0);
  warped.valid.assign(static_cast<std::size_t>(width) * height, 0);

  const ProjectionMatrix src_proj = projection_matrix(intrinsics, src_pose);
  const Vec3 src_center = src_pose.translation();

  parallel_chunks(0, height, threads, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < width; ++x) {
        if (!dst_geometry.has_hit(x, y)) {
          continue;
        }
        const Ray dst_ray = back_project(intrinsics, dst_pose, Vec2(x, y));
        const Vec3 model_point = dst_ray.point_at(dst_geometry.t_at(x, y));

        const auto projected = project(src_proj, model_point);
        if (!projected) {
          continue;  // behind the source camera
        }
        const double u = projected->pixel.x();
        const double v = projected->pixel.y();
        if (u < 0.0 || u > src.width - 1 || v < 0.0 || v > src.height - 1) {
          continue;
        }

        // Occlusion: the model point must be the first surface the source
        // camera sees in its direction.
        const Vec3 to_point = model_point - src_center;
        const double distance = to_point.norm();
        if (distance <= kRayEpsilon) {
          continue;
        }
        const Ray src_ray{src_center, to_point / distance};
        const auto src_hit = bvh.intersect(mesh, src_ray);
        if (!src_hit || std::abs(src_hit->t - distance) > kOcclusionTol) {
          continue;
        }

        const std::size_t idx = static_cast<std::size_t>(y) * width + x;
        warped.image.data[idx] =
            static_cast<std::uint8_t>(std::lround(bilinear_sample(src, u, v)));
        warped.valid[idx] = 1;
      }
    }
  });
  return warped;
}

WarpedImage reproject_image(const GrayImage& src, const Pose& src_pose, const Pose& dst_pose,
                            const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                            const Bvh& bvh, int threads) {
  const ViewGeometry geom = compute_view_geometry(mesh, bvh, intrinsics, dst_pose, threads);
  return reproject_with_geometry(src, src_pose, geom, dst_pose, intrinsics, mesh, bvh, threads);
}

}  // namespace changedet
