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

#include "changedet/image.hpp"
#include "changedet/types.hpp"

namespace changedet {

/// Corner feature. Score is the minimum eigenvalue of the 2x2 gradient
/// structure tensor accumulated over a small window.
struct Feature {
  Vec2 position = Vec2::Zero();
  double score = 0;
};

struct MotionFilterParams {
  int max_features = 200;
  int patch_radius = 7;          // px, also the in-bounds margin for features
  int pyramid_levels = 3;
  int search_radius = 8;         // px per pyramid level, at most 32
  double displacement_threshold = 2.0;  // px, median motion below this = duplicate
  double min_tracked_fraction = 0.5;    // below this the pair is untrackable

  /// Throws Error unless all fields are positive and the tracked fraction is
  /// in (0, 1].
  void validate() const;
};

struct TrackedFeature {
  Feature feature;
  Vec2 displacement = Vec2::Zero();
  bool tracked = false;
};

/// Strongest corners, non-maximum suppressed with min spacing 2*patch_radius,
/// sorted by descending score. Throws ImageTooSmall when the raster cannot
/// hold a single patch.
std::vector<Feature> detect_features(const GrayImage& img, const MotionFilterParams& params);

/// Coarse-to-fine translational patch registration from `a` to `b`. A feature
/// counts as tracked when its best match stays within the search bounds and
/// its RMS residual is at most 20% of the patch dynamic range.
std::vector<TrackedFeature> track_features(const GrayImage& a, const GrayImage& b,
                                           const std::vector<Feature>& features,
                                           const MotionFilterParams& params);

/// Greedy duplicate removal: keeps frame 0, then each frame whose median
/// tracked displacement vs. the last kept frame reaches the threshold, or
/// that cannot be tracked at all (large motion or scene change). The last
/// frame is always kept.
std::vector<int> filter_low_movement(const std::vector<GrayImage>& sequence,
                                     const MotionFilterParams& params);

}  // namespace changedet
