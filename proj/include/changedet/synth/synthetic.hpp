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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "changedet/bvh.hpp"
#include "changedet/camera.hpp"
#include "changedet/image.hpp"
#include "changedet/mesh.hpp"
#include "changedet/pose.hpp"

namespace changedet {

/// Axis-aligned textured box.
struct BoxSpec {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.15);
  std::uint8_t albedo = 200;
};

/// Fabricated room survey. The room is the axis-aligned box [0, room_size]
/// with z up. `model_objects` exist in both meshes; `change_objects` exist
/// only in the survey mesh and are the ground-truth changes.
struct SceneSpec {
  Vec3 room_size = Vec3(6.0, 4.0, 3.0);
  double texture_cell = 0.5;  // m, checker tile edge for surface texture
  std::vector<BoxSpec> model_objects;
  std::vector<BoxSpec> change_objects;
  double image_noise_sigma = 0.0;   // additive Gaussian, intensity units
  double pose_noise_rot = 0.0;      // radians, applied to emitted poses only
  double pose_noise_trans = 0.0;    // meters, applied to emitted poses only
};

struct Scene {
  TriangleMesh model;   // what the detector believes the world looks like
  TriangleMesh survey;  // what the camera actually sees
  std::vector<Vec3> change_centroids;
};

/// Throws ObjectOutsideRoom when a box protrudes past a wall.
Scene build_scene(const SceneSpec& spec);

struct PathSpec {
  enum class Mode { kWallScan, kRotateInPlace };
  Mode mode = Mode::kWallScan;
  int waypoints = 7;
};

/// Camera poses inside the room: a translational scan facing the far wall, or
/// a rotation about a fixed center.
std::vector<Pose> make_path(const PathSpec& path, const SceneSpec& scene);

/// Unlit albedo renderer: nearest-hit triangle albedo modulated by a
/// world-position checker (two intensity levels per surface), optional
/// additive Gaussian noise clamped to [0,255]. Throws CameraOutsideRoom when
/// the camera center is outside the mesh bounds. Deterministic for a fixed
/// seed regardless of thread count.
GrayImage render(const TriangleMesh& mesh, const Bvh& bvh, const CameraIntrinsics& intrinsics,
                 const Pose& pose, double texture_cell, double noise_sigma, std::uint64_t seed,
                 int threads = 0);

/// Ray-hit distance for every pixel; misses are 0 with hit flag false.
struct DepthRender {
  std::vector<double> depth;
  std::vector<std::uint8_t> hit;
};
DepthRender render_depth(const TriangleMesh& mesh, const Bvh& bvh,
                         const CameraIntrinsics& intrinsics, const Pose& pose, int threads = 0);

/// Ground truth and poses of a generated survey.
struct SurveyGroundTruth {
  std::vector<Vec3> change_centroids;
  std::vector<Pose> true_poses;     // used for rendering
  std::vector<Pose> emitted_poses;  // written to disk (perturbed when asked)
};

/// Renders the survey along the path and writes the on-disk dataset layout:
/// model.obj (change-free), NNN.pgm, NNN.pose.txt, intrinsics.txt and
/// ground_truth.json. Pose noise perturbs only the emitted poses.
SurveyGroundTruth make_survey(const SceneSpec& scene_spec, const PathSpec& path_spec,
                              const CameraIntrinsics& intrinsics,
                              const std::filesystem::path& out_dir, std::uint64_t seed,
                              int threads = 0);

std::vector<Vec3> load_ground_truth(const std::filesystem::path& path);

}  // namespace changedet
