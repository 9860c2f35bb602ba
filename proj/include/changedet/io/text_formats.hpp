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

#include "changedet/camera.hpp"
#include "changedet/pose.hpp"

namespace changedet {

/// Pose file: 12 whitespace-separated numbers, the row-major upper 3x4 of the
/// world-from-camera homogeneous matrix. Rotation drift up to 1e-6 is
/// re-orthonormalized; beyond that the file is rejected with NotARotation.
Pose load_pose_file(const std::filesystem::path& path);

void save_pose_file(const Pose& pose, const std::filesystem::path& path);

/// Intrinsics file: "fx fy cx cy width height" in one whitespace-separated
/// record.
CameraIntrinsics load_intrinsics(const std::filesystem::path& path);

void save_intrinsics(const CameraIntrinsics& intrinsics, const std::filesystem::path& path);

}  // namespace changedet
