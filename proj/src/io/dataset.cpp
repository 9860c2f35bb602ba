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

#include "changedet/io/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "changedet/errors.hpp"
#include "changedet/io/pgm.hpp"
#include "changedet/io/text_formats.hpp"

namespace changedet {

namespace {

bool is_frame_stem(const std::string& stem) {
  return !stem.empty() && std::all_of(stem.begin(), stem.end(),
                                      [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

SurveyDataset load_dataset(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw IoError("dataset root is not a directory: " + root.string());
  }
  const auto intrinsics_path = root / "intrinsics.txt";
  const auto mesh_path = root / "model.obj";
  if (!std::filesystem::exists(intrinsics_path)) {
    throw IoError("missing intrinsics.txt in " + root.string());
  }
  if (!std::filesystem::exists(mesh_path)) {
    throw IoError("missing model.obj in " + root.string());
  }

  std::vector<std::pair<long, std::filesystem::path>> frames;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".pgm") {
      continue;
    }
    const std::string stem = entry.path().stem().string();
    if (is_frame_stem(stem)) {
      frames.emplace_back(std::stol(stem), entry.path());
    }
  }
  std::sort(frames.begin(), frames.end());

  SurveyDataset dataset{root, mesh_path, {}, {}, load_intrinsics(intrinsics_path)};
  for (const auto& [index, image_path] : frames) {
    auto pose_path = image_path;
    pose_path.replace_extension(".pose.txt");
    if (!std::filesystem::exists(pose_path)) {
      throw Error("image " + image_path.string() + " has no pose file " + pose_path.string());
    }
    dataset.image_paths.push_back(image_path);
    dataset.poses.push_back(load_pose_file(pose_path));
  }
  return dataset;
}

GrayImage load_dataset_image(const SurveyDataset& dataset, std::size_t index) {
  GrayImage img = load_pgm(dataset.image_paths.at(index));
  if (img.width != dataset.intrinsics.width() || img.height != dataset.intrinsics.height()) {
    throw DimensionMismatch("image " + dataset.image_paths[index].string() +
                            " does not match the intrinsics raster size");
  }
  return img;
}

std::vector<int> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<int> indices;
  int v = 0;
  while (in >> v) {
    indices.push_back(v);
  }
  return indices;
}

void save_manifest(const std::vector<int>& indices, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  for (int i : indices) {
    out << i << "\n";
  }
}

}  // namespace changedet
