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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "changedet/detect/reproject.hpp"
#include "changedet/errors.hpp"
#include "changedet/io/dataset.hpp"
#include "changedet/io/obj.hpp"
#include "changedet/synth/synthetic.hpp"

using namespace changedet;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "changedet_synth_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

SceneSpec base_spec() {
  SceneSpec spec;
  spec.room_size = Vec3(6.0, 4.0, 3.0);
  spec.texture_cell = 0.5;
  return spec;
}

BoxSpec cube_change() {
  BoxSpec cube;
  cube.center = Vec3(3.0, 3.0, 1.5);
  cube.half_extents = Vec3::Constant(0.15);
  cube.albedo = 45;
  return cube;
}

CameraIntrinsics small_camera() { return CameraIntrinsics(250.0, 250.0, 160.0, 120.0, 320, 240); }

// Camera at `center` looking along world +y, image x along +x.
Pose facing_plus_y(const Vec3& center) {
  Mat3 rotation;
  rotation.col(0) = Vec3(1, 0, 0);
  rotation.col(1) = Vec3(0, 0, -1);
  rotation.col(2) = Vec3(0, 1, 0);
  return Pose(rotation, center);
}

}  // namespace

TEST_CASE("build_scene: no changes means identical meshes and no centroids") {
  const Scene scene = build_scene(base_spec());
  CHECK(scene.change_centroids.empty());
  CHECK(scene.model.vertices.size() == scene.survey.vertices.size());
  CHECK(scene.model.triangles.size() == scene.survey.triangles.size());
  CHECK(scene.model.triangles.size() == 12);  // just the room box
}

TEST_CASE("build_scene: one cube change adds survey-only geometry") {
  SceneSpec spec = base_spec();
  spec.change_objects = {cube_change()};
  const Scene scene = build_scene(spec);
  REQUIRE(scene.change_centroids.size() == 1);
  CHECK((scene.change_centroids[0] - cube_change().center).norm() == 0.0);
  CHECK(scene.survey.triangles.size() == scene.model.triangles.size() + 12);
}

TEST_CASE("build_scene: objects overlapping walls are rejected") {
  SceneSpec spec = base_spec();
  BoxSpec bad;
  bad.center = Vec3(0.05, 2.0, 1.5);  // protrudes through the x=0 wall
  bad.half_extents = Vec3::Constant(0.2);
  spec.change_objects = {bad};
  CHECK_THROWS_AS(build_scene(spec), ObjectOutsideRoom);
}

TEST_CASE("render: a wall-filling view is exactly bimodal") {
  const SceneSpec spec = base_spec();
  const Scene scene = build_scene(spec);
  const Bvh bvh = Bvh::build(scene.survey);
  const CameraIntrinsics k = small_camera();
  // 0.8 m from the +y wall, straight on: the frame spans ~0.55 m, all wall.
  const Pose facing = facing_plus_y(Vec3(3.0, 3.2, 1.5));

  const GrayImage img = render(scene.survey, bvh, k, facing, spec.texture_cell, 0.0, 1);
  std::set<int> values;
  for (std::uint8_t v : img.data) {
    values.insert(v);
  }
  CHECK(values.size() == 2);
}

TEST_CASE("render: deterministic for a fixed seed, including noise") {
  const SceneSpec spec = base_spec();
  const Scene scene = build_scene(spec);
  const Bvh bvh = Bvh::build(scene.survey);
  const CameraIntrinsics k = small_camera();
  const Pose pose = make_path({PathSpec::Mode::kWallScan, 3}, spec)[1];

  const GrayImage a = render(scene.survey, bvh, k, pose, spec.texture_cell, 0.0, 7, 1);
  const GrayImage b = render(scene.survey, bvh, k, pose, spec.texture_cell, 0.0, 7, 2);
  CHECK(a.data == b.data);

  const GrayImage n1 = render(scene.survey, bvh, k, pose, spec.texture_cell, 5.0, 7, 1);
  const GrayImage n2 = render(scene.survey, bvh, k, pose, spec.texture_cell, 5.0, 7, 2);
  CHECK(n1.data == n2.data);
  CHECK(n1.data != a.data);
}

TEST_CASE("render: center-pixel depth matches the analytic wall distance") {
  const SceneSpec spec = base_spec();
  const Scene scene = build_scene(spec);
  const Bvh bvh = Bvh::build(scene.survey);
  const CameraIntrinsics k = small_camera();

  const double wall_distance = 4.0 - 1.3;
  const Pose pose = facing_plus_y(Vec3(3.0, 1.3, 1.5));

  const DepthRender depth = render_depth(scene.survey, bvh, k, pose);
  const int cx = 160, cy = 120;
  REQUIRE(depth.hit[static_cast<std::size_t>(cy) * 320 + cx] == 1);
  CHECK(std::abs(depth.depth[static_cast<std::size_t>(cy) * 320 + cx] - wall_distance) < 1e-6);
}

TEST_CASE("render: camera outside the room is rejected") {
  const SceneSpec spec = base_spec();
  const Scene scene = build_scene(spec);
  const Bvh bvh = Bvh::build(scene.survey);
  const Pose outside(Mat3::Identity(), Vec3(-1.0, 2.0, 1.5));
  CHECK_THROWS_AS(render(scene.survey, bvh, small_camera(), outside, 0.5, 0.0, 1),
                  CameraOutsideRoom);
}

TEST_CASE("make_path: wall scan translates, rotate-in-place pivots") {
  const SceneSpec spec = base_spec();
  const auto scan = make_path({PathSpec::Mode::kWallScan, 7}, spec);
  REQUIRE(scan.size() == 7);
  for (std::size_t i = 1; i < scan.size(); ++i) {
    CHECK((scan[i].rotation() - scan[0].rotation()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((scan[i].translation() - scan[i - 1].translation()).norm() > 0.1);
  }

  const auto pivot = make_path({PathSpec::Mode::kRotateInPlace, 6}, spec);
  REQUIRE(pivot.size() == 6);
  for (std::size_t i = 1; i < pivot.size(); ++i) {
    CHECK((pivot[i].translation() - pivot[0].translation()).norm() < 1e-9);
    CHECK((pivot[i].rotation() - pivot[0].rotation()).cwiseAbs().maxCoeff() > 0.1);
  }
}

TEST_CASE("make_survey: writes a reloadable dataset with ground truth") {
  const auto dir = temp_dir("survey");
  SceneSpec spec = base_spec();
  spec.change_objects = {cube_change()};
  const CameraIntrinsics k = small_camera();
  const SurveyGroundTruth truth = make_survey(spec, {PathSpec::Mode::kWallScan, 7}, k, dir, 5);

  CHECK(std::filesystem::exists(dir / "model.obj"));
  CHECK(std::filesystem::exists(dir / "intrinsics.txt"));
  CHECK(std::filesystem::exists(dir / "ground_truth.json"));
  int pgm_count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    pgm_count += entry.path().extension() == ".pgm" ? 1 : 0;
  }
  CHECK(pgm_count == 7);

  const auto centroids = load_ground_truth(dir / "ground_truth.json");
  REQUIRE(centroids.size() == 1);
  CHECK((centroids[0] - cube_change().center).norm() < 1e-12);

  const SurveyDataset dataset = load_dataset(dir);
  REQUIRE(dataset.size() == 7);
  CHECK(dataset.intrinsics.width() == 320);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    CHECK((dataset.poses[i].rotation() - truth.emitted_poses[i].rotation())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CHECK((dataset.poses[i].translation() - truth.emitted_poses[i].translation()).norm() < 1e-9);
  }

  // The model mesh on disk excludes the change object.
  const TriangleMesh model = load_obj(dataset.mesh_path);
  CHECK(model.triangles.size() == 12);
}

TEST_CASE("make_survey: identical seeds give byte-identical datasets") {
  const auto dir_a = temp_dir("det_a");
  const auto dir_b = temp_dir("det_b");
  SceneSpec spec = base_spec();
  spec.image_noise_sigma = 3.0;
  spec.pose_noise_rot = 0.01;
  spec.pose_noise_trans = 0.005;
  const CameraIntrinsics k = small_camera();
  make_survey(spec, {PathSpec::Mode::kWallScan, 3}, k, dir_a, 99);
  make_survey(spec, {PathSpec::Mode::kWallScan, 3}, k, dir_b, 99);
  for (const char* name : {"000.pgm", "001.pgm", "002.pgm", "000.pose.txt", "model.obj"}) {
    CHECK(read_file(dir_a / name) == read_file(dir_b / name));
  }
}

TEST_CASE("make_survey: rotate-in-place keeps the camera center fixed") {
  const auto dir = temp_dir("rotate");
  const SurveyGroundTruth truth =
      make_survey(base_spec(), {PathSpec::Mode::kRotateInPlace, 5}, small_camera(), dir, 3);
  for (std::size_t i = 1; i < truth.true_poses.size(); ++i) {
    CHECK((truth.true_poses[i].translation() - truth.true_poses[0].translation()).norm() < 1e-9);
  }
}

TEST_CASE("renderer-model consistency: warp between path poses matches the render") {
  const SceneSpec spec = base_spec();
  const Scene scene = build_scene(spec);
  const Bvh bvh = Bvh::build(scene.survey);
  const CameraIntrinsics k = small_camera();
  const auto path = make_path({PathSpec::Mode::kWallScan, 4}, spec);

  for (int src_index : {0, 2}) {
    const GrayImage src =
        render(scene.survey, bvh, k, path[src_index], spec.texture_cell, 0.0, 1);
    const GrayImage dst = render(scene.survey, bvh, k, path[1], spec.texture_cell, 0.0, 1);
    const WarpedImage warped =
        reproject_image(src, path[src_index], path[1], k, scene.survey, bvh);
    double abs_sum = 0;
    std::size_t valid_count = 0;
    for (int y = 0; y < dst.height; ++y) {
      for (int x = 0; x < dst.width; ++x) {
        if (warped.is_valid(x, y)) {
          abs_sum += std::abs(static_cast<int>(dst.at(x, y)) -
                              static_cast<int>(warped.image.at(x, y)));
          ++valid_count;
        }
      }
    }
    REQUIRE(valid_count > 0);
    CHECK(abs_sum / static_cast<double>(valid_count) < 1.0);
  }
}
