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
#include <vector>

#include "changedet/regions.hpp"

namespace changedet {

/// JSON array of {mean, covariance (row-major 3x3), support, pixel_area},
/// ordered by descending support size, then lexicographic mean. Output is
/// byte-stable for identical inputs.
void write_change_report(const std::vector<ChangeRegion3D>& regions,
                         const std::filesystem::path& path);

std::vector<ChangeRegion3D> read_change_report(const std::filesystem::path& path);

/// ASCII PLY point cloud sampling each region's n_sigma covariance ellipsoid
/// surface with 162 points (icosphere, 2 subdivisions). Throws
/// NonPositiveDefiniteCovariance when a covariance has a negative eigenvalue.
void write_ply_ellipsoids(const std::vector<ChangeRegion3D>& regions,
                          const std::filesystem::path& path, double n_sigma);

}  // namespace changedet
