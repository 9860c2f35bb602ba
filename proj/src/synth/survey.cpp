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

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "changedet/errors.hpp"
#include "changedet/io/obj.hpp"
#include "changedet/io/pgm.hpp"
#include "changedet/io/text_formats.hpp"
#include "changedet/synth/synthetic.hpp"

namespace changedet {

namespace {

Pose perturb_pose(const Pose& pose, double rot_sigma, double trans_sigma, std::mt19937_64& rng) {
  if (rot_sigma <= 0.0 && trans_sigma <= 0.0) {
    return pose;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
  if (axis.norm() < 1e-12) {
    axis = Vec3::UnitX();
  }
  axis.normalize();
  const double angle = rot_sigma * gauss(rng);
  const Mat3 delta = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  const Vec3 jitter(trans_sigma * gauss(rng), trans_sigma * gauss(rng),
                    trans_sigma * gauss(rng));
  return Pose(orthonormalize_rotation(delta * pose.rotation()), pose.translation() + jitter);
}

std::string frame_name(int index) {
  std::ostringstream name;
  name << std::setw(3) << std::setfill('0') << index;
  return name.str();
}

}  // namespace

SurveyGroundTruth make_survey(const SceneSpec& scene_spec, const PathSpec& path_spec,
                              const CameraIntrinsics& intrinsics,
                              const std::filesystem::path& out_dir, std::uint64_t seed,
                              int threads) {
  const Scene scene = build_scene(scene_spec);
  const Bvh survey_bvh = Bvh::build(scene.survey);
  const std::vector<Pose> path = make_path(path_spec, scene_spec);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }

  std::mt19937_64 rng(seed);

  SurveyGroundTruth truth;
  truth.change_centroids = scene.change_centroids;
  for (int i = 0; i < static_cast<int>(path.size()); ++i) {
    const std::uint64_t render_seed = rng();
    const GrayImage img = render(scene.survey, survey_bvh, intrinsics, path[i],
                                 scene_spec.texture_cell, scene_spec.image_noise_sigma,
                                 render_seed, threads);
    const Pose emitted =
        perturb_pose(path[i], scene_spec.pose_noise_rot, scene_spec.pose_noise_trans, rng);

    const std::string name = frame_name(i);
    save_pgm(img, out_dir / (name + ".pgm"));
    save_pose_file(emitted, out_dir / (name + ".pose.txt"));
    truth.true_poses.push_back(path[i]);
    truth.emitted_poses.push_back(emitted);
  }

  save_obj(scene.model, out_dir / "model.obj");
  save_intrinsics(intrinsics, out_dir / "intrinsics.txt");

  nlohmann::json doc;
  doc["change_centroids"] = nlohmann::json::array();
  for (const Vec3& c : scene.change_centroids) {
    doc["change_centroids"].push_back({c.x(), c.y(), c.z()});
  }
  std::ofstream gt(out_dir / "ground_truth.json");
  if (!gt) {
    throw IoError("cannot write ground_truth.json in " + out_dir.string());
  }
  gt << doc.dump(2) << "\n";
  return truth;
}

std::vector<Vec3> load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid ground truth " + path.string() + ": " + e.what());
  }
  std::vector<Vec3> centroids;
  for (const auto& entry : doc.at("change_centroids")) {
    centroids.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>(),
                           entry.at(2).get<double>());
  }
  return centroids;
}

}  // namespace changedet
