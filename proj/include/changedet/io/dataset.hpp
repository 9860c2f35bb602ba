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
#include <string>
#include <vector>

#include "changedet/camera.hpp"
#include "changedet/image.hpp"
#include "changedet/pose.hpp"

namespace changedet {

/// One survey on disk: ordered image/pose pairs sharing a single camera, plus
/// the world model. Layout:
///   root/model.obj, root/intrinsics.txt,
///   root/NNN.pgm + root/NNN.pose.txt per frame (NNN = zero-padded index).
struct SurveyDataset {
  std::filesystem::path root;
  std::filesystem::path mesh_path;
  std::vector<std::filesystem::path> image_paths;
  std::vector<Pose> poses;
  CameraIntrinsics intrinsics;

  std::size_t size() const { return image_paths.size(); }
};

/// Scans `root` for the survey layout above. Throws IoError when mandatory
/// files are missing and Error when an image lacks its pose file.
SurveyDataset load_dataset(const std::filesystem::path& root);

/// Loads an image and checks it against the dataset intrinsics raster size.
GrayImage load_dataset_image(const SurveyDataset& dataset, std::size_t index);

/// Kept-frame manifest: ascii, one frame index per line.
std::vector<int> load_manifest(const std::filesystem::path& path);
void save_manifest(const std::vector<int>& indices, const std::filesystem::path& path);

}  // namespace changedet
