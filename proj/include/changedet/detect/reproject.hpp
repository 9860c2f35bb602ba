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

#include "changedet/bvh.hpp"
#include "changedet/camera.hpp"
#include "changedet/image.hpp"

namespace changedet {

/// Re-projected view: the content another image predicts at this pose given
/// the model. Pixels with no model hit, an out-of-bounds or occluded source
/// sample, or non-positive depth in either view are invalid and carry
/// intensity 0.
struct WarpedImage {
  GrayImage image;
  std::vector<std::uint8_t> valid;

  bool is_valid(int x, int y) const {
    return valid[static_cast<std::size_t>(y) * image.width + x] != 0;
  }
};

/// Per-pixel model geometry of one view: ray hit distance for every pixel
/// that intersects the model. Computed once per image and shared by all the
/// pairwise comparisons that re-project into this view.
struct ViewGeometry {
  int width = 0;
  int height = 0;
  std::vector<double> ray_t;       // distance along the back-projected ray
  std::vector<std::uint8_t> hit;

  bool has_hit(int x, int y) const { return hit[static_cast<std::size_t>(y) * width + x] != 0; }
  double t_at(int x, int y) const { return ray_t[static_cast<std::size_t>(y) * width + x]; }
};

ViewGeometry compute_view_geometry(const TriangleMesh& mesh, const Bvh& bvh,
                                   const CameraIntrinsics& intrinsics, const Pose& pose,
                                   int threads = 0);

/// Renders the content of `src` (taken at `src_pose`) into the image plane at
/// `dst_pose` through the model, using precomputed destination geometry.
/// Source samples are bilinear; a source sample whose model point is occluded
/// in the source view (second-cast distance disagreement above 1 cm) is
/// invalid.
WarpedImage reproject_with_geometry(const GrayImage& src, const Pose& src_pose,
                                    const ViewGeometry& dst_geometry, const Pose& dst_pose,
                                    const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                                    const Bvh& bvh, int threads = 0);

/// Convenience entry point that computes the destination geometry internally.
WarpedImage reproject_image(const GrayImage& src, const Pose& src_pose, const Pose& dst_pose,
                            const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                            const Bvh& bvh, int threads = 0);

}  // namespace changedet
