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

#include "changedet/detect/confirm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

bool gate_passes(const Vec2& delta, const Mat2& covariance, double tau2) {
  if (delta.squaredNorm() < 1e-12) {
    return true;  // coincident means gate in under any covariance
  }
  const double det = covariance.determinant();
  if (!(det > 1e-12)) {
    return false;
  }
  return delta.dot(covariance.inverse() * delta) < tau2;
}

int find_root(std::vector<int>& parent, int a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

}  // namespace

std::vector<int> neighbor_indices(int image_index, int image_count, int max_comparisons) {
  std::vector<int> neighbors;
  for (int step = 1; static_cast<int>(neighbors.size()) < max_comparisons && step < image_count;
       ++step) {
    if (image_index - step >= 0) {
      neighbors.push_back(image_index - step);
    }
    if (static_cast<int>(neighbors.size()) >= max_comparisons) {
      break;
    }
    if (image_index + step < image_count) {
      neighbors.push_back(image_index + step);
    }
  }
  return neighbors;
}

std::optional<RegionCandidate> project_region_candidate(
    const ChangeRegion2D& region, int neighbor_index, const ViewGeometry& neighbor_geometry,
    const Pose& neighbor_pose, const CameraIntrinsics& intrinsics,
    const ProjectionMatrix& target_projection, const TriangleMesh& mesh, const Bvh& bvh) {
  const Ray mean_ray = back_project(intrinsics, neighbor_pose, region.mean);
  const auto mean_hit = bvh.intersect(mesh, mean_ray);
  if (!mean_hit) {
    return std::nullopt;
  }
  const auto mean_projected = project(target_projection, mean_hit->point);
  if (!mean_projected) {
    return std::nullopt;
  }
  const Vec2 mean = mean_projected->pixel;
  if (mean.x() < 0.0 || mean.x() > intrinsics.width() - 1 || mean.y() < 0.0 ||
      mean.y() > intrinsics.height() - 1) {
    return std::nullopt;
  }

  RegionCandidate candidate;
  candidate.mean_in_target = mean;
  candidate.covariance = region.covariance;
  candidate.neighbor_index = neighbor_index;
  candidate.pixels_in_target.reserve(region.pixels.size());
  for (const auto& pixel : region.pixels) {
    if (!neighbor_geometry.has_hit(pixel.x(), pixel.y())) {
      continue;
    }
    const Ray ray = back_project(intrinsics, neighbor_pose, pixel.cast<double>());
    const Vec3 point = ray.point_at(neighbor_geometry.t_at(pixel.x(), pixel.y()));
    const auto projected = project(target_projection, point);
    if (!projected) {
      continue;
    }
    const int px = static_cast<int>(std::lround(projected->pixel.x()));
    const int py = static_cast<int>(std::lround(projected->pixel.y()));
    if (px < 0 || px >= intrinsics.width() || py < 0 || py >= intrinsics.height()) {
      continue;
    }
    candidate.pixels_in_target.emplace_back(px, py);
  }
  return candidate;
}

std::vector<ChangeRegion2D> confirm_candidates(int image_index,
                                               const std::vector<RegionCandidate>& candidates,
                                               const UncertaintyModel& uncertainty,
                                               int min_confirming_pairs) {
  const int n = static_cast<int>(candidates.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (candidates[a].neighbor_index == candidates[b].neighbor_index) {
        continue;
      }
      const Vec2 delta = candidates[a].mean_in_target - candidates[b].mean_in_target;
      if (gate_passes(delta, candidates[a].covariance, uncertainty.tau2()) &&
          gate_passes(delta, candidates[b].covariance, uncertainty.tau2())) {
        parent[find_root(parent, a)] = find_root(parent, b);
      }
    }
  }

  std::vector<std::vector<int>> clusters(n);
  for (int a = 0; a < n; ++a) {
    clusters[find_root(parent, a)].push_back(a);
  }

  std::vector<ChangeRegion2D> confirmed;
  for (const auto& cluster : clusters) {
    if (cluster.empty()) {
      continue;
    }

    // Second stage: region-extent gates cluster generously, so re-associate
    // within the cluster at the re-projection uncertainty scale. Candidates
    // re-projecting onto the same change coincide at this scale; pair echoes
    // that only overlapped through fat region covariances land tens of
    // pixels apart and fall out.
    const int cluster_size = static_cast<int>(cluster.size());
    std::vector<int> sub_parent(cluster_size);
    std::iota(sub_parent.begin(), sub_parent.end(), 0);
    for (int a = 0; a < cluster_size; ++a) {
      for (int b = a + 1; b < cluster_size; ++b) {
        const Vec2 delta =
            candidates[cluster[a]].mean_in_target - candidates[cluster[b]].mean_in_target;
        if (uncertainty.mahalanobis_sq(delta) < uncertainty.tau2()) {
          sub_parent[find_root(sub_parent, a)] = find_root(sub_parent, b);
        }
      }
    }
    std::vector<std::vector<int>> subclusters(cluster_size);
    for (int a = 0; a < cluster_size; ++a) {
      subclusters[find_root(sub_parent, a)].push_back(cluster[a]);
    }

    for (const auto& members : subclusters) {
      if (members.empty()) {
        continue;
      }
      std::set<int> pairs;
      for (int m : members) {
        pairs.insert(candidates[m].neighbor_index);
      }
      if (static_cast<int>(pairs.size()) < min_confirming_pairs) {
        continue;
      }

      std::set<std::pair<int, int>> unique_pixels;
      for (int m : members) {
        for (const auto& pixel : candidates[m].pixels_in_target) {
          unique_pixels.emplace(pixel.x(), pixel.y());
        }
      }
      if (unique_pixels.empty()) {
        continue;
      }

      ChangeRegion2D region;
      region.image_index = image_index;
      region.pixels.reserve(unique_pixels.size());
      Vec2 sum = Vec2::Zero();
      for (const auto& [px, py] : unique_pixels) {
        region.pixels.emplace_back(px, py);
        sum += Vec2(px, py);
      }
      region.area = static_cast<double>(region.pixels.size());
      region.mean = sum / region.area;
      Mat2 scatter = Mat2::Zero();
      for (const auto& pixel : region.pixels) {
        const Vec2 d = pixel.cast<double>() - region.mean;
        scatter += d * d.transpose();
      }
      region.covariance = scatter / region.area;
      confirmed.push_back(std::move(region));
    }
  }
  return confirmed;
}

std::vector<ChangeRegion2D> confirm_regions(int image_index, const std::vector<GrayImage>& images,
                                            const std::vector<Pose>& poses,
                                            const CameraIntrinsics& intrinsics,
                                            const TriangleMesh& mesh, const Bvh& bvh,
                                            const InconsistencyParams& params,
                                            const UncertaintyModel& uncertainty, int threads) {
  if (images.size() < 2) {
    throw NotEnoughImages("confirmation requires at least 2 images");
  }
  const int count = static_cast<int>(images.size());
  const ProjectionMatrix target_projection = projection_matrix(intrinsics, poses[image_index]);

  std::vector<RegionCandidate> candidates;
  for (int neighbor : neighbor_indices(image_index, count, params.max_comparisons)) {
    const ViewGeometry geometry =
        compute_view_geometry(mesh, bvh, intrinsics, poses[neighbor], threads);
    const WarpedImage warped = reproject_with_geometry(
        images[image_index], poses[image_index], geometry, poses[neighbor], intrinsics, mesh, bvh,
        threads);
    const FloatImage distance =
        inconsistency_distance(images[neighbor], warped, uncertainty, threads);
    for (const ChangeRegion2D& region : extract_regions(distance, params)) {
      if (auto candidate =
              project_region_candidate(region, neighbor, geometry, poses[neighbor], intrinsics,
                                       target_projection, mesh, bvh)) {
        candidates.push_back(std::move(*candidate));
      }
    }
  }
  return confirm_candidates(image_index, candidates, uncertainty, params.min_confirming_pairs);
}

}  // namespace changedet
