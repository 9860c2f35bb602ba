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

#include <ostream>
#include <vector>

#include "changedet/bvh.hpp"
#include "changedet/camera.hpp"
#include "changedet/detect/inconsistency.hpp"
#include "changedet/regions.hpp"

namespace changedet {

/// Groups confirmed 2D regions across images by cross-view gating through the
/// model, then triangulates each group's sigma points view-by-view: the 3D
/// mean is the average of the five triangulated points and the 3D covariance
/// their unscented sample covariance. Groups whose triangulation fails
/// (degenerate baseline, behind-camera solutions) are dropped; the reason
/// goes to `log` when provided.
std::vector<ChangeRegion3D> estimate_change_regions(const std::vector<ChangeRegion2D>& confirmed,
                                                    const std::vector<Pose>& poses,
                                                    const CameraIntrinsics& intrinsics,
                                                    const TriangleMesh& mesh, const Bvh& bvh,
                                                    const UncertaintyModel& uncertainty,
                                                    std::ostream* log = nullptr);

/// Drops regions whose mean lies within min_distance of any supporting
/// camera center.
std::vector<ChangeRegion3D> prune_near_camera(const std::vector<ChangeRegion3D>& regions,
                                              const std::vector<Pose>& poses,
                                              double min_distance);

}  // namespace changedet
