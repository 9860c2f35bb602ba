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

#include "changedet/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "changedet/errors.hpp"
#include "changedet/io/obj.hpp"
#include "changedet/io/pgm.hpp"

namespace changedet {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void dump_pair_debug(const std::filesystem::path& dir, int image_index, int neighbor_index,
                     const FloatImage& distance, double threshold) {
  GrayImage dist_img(distance.width, distance.height);
  GrayImage mask_img(distance.width, distance.height);
  for (std::size_t i = 0; i < distance.data.size(); ++i) {
    const float d = distance.data[i];
    dist_img.data[i] = static_cast<std::uint8_t>(std::lround(std::clamp(d, 0.f, 255.f)));
    mask_img.data[i] = d > threshold ? 255 : 0;
  }
  std::ostringstream stem;
  stem << "pair_" << image_index << "_" << neighbor_index;
  save_pgm(dist_img, dir / (stem.str() + "_distance.pgm"));
  save_pgm(mask_img, dir / (stem.str() + "_mask.pgm"));
}

}  // namespace

DetectionResult detect_changes(const std::vector<GrayImage>& images,
                               const std::vector<Pose>& poses,
                               const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                               const Bvh& bvh, const DetectParams& params, std::ostream* log) {
  if (images.size() < 2) {
    throw NotEnoughImages("detection requires at least 2 images");
  }
  if (images.size() != poses.size()) {
    throw DimensionMismatch("image and pose counts differ");
  }
  const int count = static_cast<int>(images.size());

  DetectionResult result;
  result.effective_max_comparisons =
      std::min(params.inconsistency.max_comparisons, count - 1);
  result.clamped_max_comparisons =
      result.effective_max_comparisons < params.inconsistency.max_comparisons;
  if (result.clamped_max_comparisons && log != nullptr) {
    *log << "warning: max comparisons clamped to " << result.effective_max_comparisons
         << " available neighbors\n";
  }
  InconsistencyParams incon = params.inconsistency;
  incon.max_comparisons = result.effective_max_comparisons;

  if (params.debug_dir) {
    std::filesystem::create_directories(*params.debug_dir);
  }

  const auto incon_start = std::chrono::steady_clock::now();

  // Model geometry per view, shared by every comparison targeting that view.
  std::vector<ViewGeometry> geometries;
  geometries.reserve(count);
  for (int i = 0; i < count; ++i) {
    geometries.push_back(compute_view_geometry(mesh, bvh, intrinsics, poses[i], params.threads));
  }
  std::vector<ProjectionMatrix> projections;
  projections.reserve(count);
  for (int i = 0; i < count; ++i) {
    projections.push_back(projection_matrix(intrinsics, poses[i]));
  }

  result.confirmed_2d.resize(count);
  for (int i = 0; i < count; ++i) {
    std::vector<RegionCandidate> candidates;
    for (int neighbor : neighbor_indices(i, count, incon.max_comparisons)) {
      const WarpedImage warped =
          reproject_with_geometry(images[i], poses[i], geometries[neighbor], poses[neighbor],
                                  intrinsics, mesh, bvh, params.threads);
      const FloatImage distance =
          inconsistency_distance(images[neighbor], warped, params.uncertainty, params.threads);
      ++result.pair_comparisons;
      if (params.debug_dir) {
        dump_pair_debug(*params.debug_dir, i, neighbor, distance,
                        incon.intensity_threshold);
      }
      for (const ChangeRegion2D& region : extract_regions(distance, incon)) {
        if (auto candidate =
                project_region_candidate(region, neighbor, geometries[neighbor], poses[neighbor],
                                         intrinsics, projections[i], mesh, bvh)) {
          candidates.push_back(std::move(*candidate));
        }
      }
    }
    result.confirmed_2d[i] = confirm_candidates(i, candidates, params.uncertainty,
                                                incon.min_confirming_pairs);
  }
  result.timings.inconsistencies = seconds_since(incon_start);

  const auto change_start = std::chrono::steady_clock::now();
  std::vector<ChangeRegion2D> all_confirmed;
  for (const auto& per_image : result.confirmed_2d) {
    all_confirmed.insert(all_confirmed.end(), per_image.begin(), per_image.end());
  }
  result.regions = estimate_change_regions(all_confirmed, poses, intrinsics, mesh, bvh,
                                           params.uncertainty, log);
  result.regions = prune_near_camera(result.regions, poses, params.prune_min_distance);
  result.timings.change_3d = seconds_since(change_start);
  return result;
}

DetectionResult run_detection(const SurveyDataset& dataset,
                              const std::optional<std::vector<int>>& manifest,
                              const DetectParams& params, std::ostream* log) {
  const auto load_start = std::chrono::steady_clock::now();

  std::vector<int> indices;
  if (manifest) {
    indices = *manifest;
    for (int index : indices) {
      if (index < 0 || index >= static_cast<int>(dataset.size())) {
        throw IndexOutOfRange("manifest frame index " + std::to_string(index) +
                              " outside the dataset");
      }
    }
  } else {
    indices.resize(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      indices[i] = static_cast<int>(i);
    }
  }

  std::vector<GrayImage> images;
  std::vector<Pose> poses;
  images.reserve(indices.size());
  poses.reserve(indices.size());
  for (int index : indices) {
    images.push_back(load_dataset_image(dataset, index));
    poses.push_back(dataset.poses[index]);
  }
  TriangleMesh mesh = load_obj(dataset.mesh_path);
  const Bvh bvh = Bvh::build(mesh);
  const double load_seconds = seconds_since(load_start);

  DetectionResult result = detect_changes(images, poses, dataset.intrinsics, mesh, bvh, params,
                                          log);
  result.timings.data_loading = load_seconds;
  // Report support in dataset frame numbers, not subset positions.
  for (ChangeRegion3D& region : result.regions) {
    for (int& s : region.support) {
      s = indices[s];
    }
  }
  return result;
}

}  // namespace changedet
