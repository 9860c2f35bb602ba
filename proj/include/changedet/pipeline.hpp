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

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "changedet/change3d/estimate.hpp"
#include "changedet/detect/confirm.hpp"
#include "changedet/io/dataset.hpp"
#include "changedet/motion/motion_filter.hpp"

namespace changedet {

struct DetectParams {
  InconsistencyParams inconsistency;
  UncertaintyModel uncertainty;
  double prune_min_distance = 0.5;  // m, near-camera false-positive filter
  int threads = 0;
  std::optional<std::filesystem::path> debug_dir;  // per-pair distance/mask dumps
};

/// Wall-clock seconds per pipeline stage, mirroring the batch decomposition
/// data loading | inconsistencies | 3D change.
struct StageTimings {
  double data_loading = 0;
  double inconsistencies = 0;
  double change_3d = 0;
};

struct DetectionResult {
  std::vector<ChangeRegion3D> regions;
  std::vector<std::vector<ChangeRegion2D>> confirmed_2d;  // per image
  StageTimings timings;
  int pair_comparisons = 0;
  int effective_max_comparisons = 0;
  bool clamped_max_comparisons = false;
};

/// In-memory detection over a loaded survey. `poses` are the poses the
/// detector believes; the BVH must belong to `mesh`. Only the inconsistency
/// and 3D-change stages are timed here.
DetectionResult detect_changes(const std::vector<GrayImage>& images,
                               const std::vector<Pose>& poses,
                               const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                               const Bvh& bvh, const DetectParams& params,
                               std::ostream* log = nullptr);

/// Full disk-to-report run: loads the dataset (optionally subset by a
/// manifest of frame indices), detects changes, and fills in the data-loading
/// time.
DetectionResult run_detection(const SurveyDataset& dataset,
                              const std::optional<std::vector<int>>& manifest,
                              const DetectParams& params, std::ostream* log = nullptr);

}  // namespace changedet
