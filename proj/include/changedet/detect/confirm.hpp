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

#include "changedet/detect/inconsistency.hpp"
#include "changedet/detect/reproject.hpp"

namespace changedet {

/// A change region detected in a pairwise comparison, re-projected through
/// the model into the target image. The covariance stays the region's own
/// pixel covariance.
struct RegionCandidate {
  Vec2 mean_in_target = Vec2::Zero();
  Mat2 covariance = Mat2::Zero();
  int neighbor_index = -1;
  std::vector<Eigen::Vector2i> pixels_in_target;
};

/// Sequence-adjacent neighbors of `image_index`, nearest first (-1, +1, -2,
/// +2, ...), clamped to at most `max_comparisons` existing frames.
std::vector<int> neighbor_indices(int image_index, int image_count, int max_comparisons);

/// Maps a region detected in a neighbor frame into the target view: the mean
/// ray is cast against the model and the hit re-projected; member pixels are
/// transferred the same way via the cached neighbor geometry. Returns nullopt
/// when the mean ray escapes the model or lands outside the target raster.
std::optional<RegionCandidate> project_region_candidate(
    const ChangeRegion2D& region, int neighbor_index, const ViewGeometry& neighbor_geometry,
    const Pose& neighbor_pose, const CameraIntrinsics& intrinsics,
    const ProjectionMatrix& target_projection, const TriangleMesh& mesh, const Bvh& bvh);

/// Clusters candidates by mutual Mahalanobis gating on their target-frame
/// means and keeps clusters backed by at least `min_confirming_pairs`
/// distinct neighbors. Each confirmed region aggregates the member pixels of
/// its cluster.
std::vector<ChangeRegion2D> confirm_candidates(int image_index,
                                               const std::vector<RegionCandidate>& candidates,
                                               const UncertaintyModel& uncertainty,
                                               int min_confirming_pairs);

/// Full per-image confirmation: compares `image_index` against up to
/// max_comparisons neighbors, detects pairwise change regions, re-projects
/// them into this image through the model, and keeps the multi-pair
/// consistent ones. Throws NotEnoughImages when fewer than 2 images exist.
std::vector<ChangeRegion2D> confirm_regions(int image_index, const std::vector<GrayImage>& images,
                                            const std::vector<Pose>& poses,
                                            const CameraIntrinsics& intrinsics,
                                            const TriangleMesh& mesh, const Bvh& bvh,
                                            const InconsistencyParams& params,
                                            const UncertaintyModel& uncertainty, int threads = 0);

}  // namespace changedet
