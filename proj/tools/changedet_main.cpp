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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "changedet/errors.hpp"
#include "changedet/io/dataset.hpp"
#include "changedet/io/obj.hpp"
#include "changedet/io/report.hpp"
#include "changedet/motion/motion_filter.hpp"
#include "changedet/pipeline.hpp"
#include "changedet/synth/synthetic.hpp"

namespace {

using namespace changedet;

struct GenerateOptions {
  std::string out;
  std::string preset = "wall-scan";
  std::string change = "none";
  int frames = 7;
  int width = 640;
  int height = 480;
  double focal = 500.0;
  std::vector<double> room = {6.0, 4.0, 3.0};
  double cell = 0.5;
  double noise = 0.0;
  double pose_noise_rot_deg = 0.0;
  double pose_noise_trans = 0.0;
  std::uint64_t seed = 1;
  int threads = 0;
};

int cmd_generate(const GenerateOptions& opt) {
  SceneSpec scene;
  scene.room_size = Vec3(opt.room[0], opt.room[1], opt.room[2]);
  scene.texture_cell = opt.cell;
  scene.image_noise_sigma = opt.noise;
  scene.pose_noise_rot = opt.pose_noise_rot_deg * EIGEN_PI / 180.0;
  scene.pose_noise_trans = opt.pose_noise_trans;
  if (opt.change == "cube") {
    BoxSpec cube;  // floating mid-room in front of the scanned wall
    cube.center = Vec3(0.5 * scene.room_size.x(), 0.6 * scene.room_size.y(),
                       0.5 * scene.room_size.z());
    cube.half_extents = Vec3::Constant(0.15);
    cube.albedo = 45;
    scene.change_objects.push_back(cube);
  } else if (opt.change != "none") {
    std::cerr << "unknown --change preset: " << opt.change << "\n";
    return 2;
  }

  PathSpec path;
  path.mode = opt.preset == "rotate" ? PathSpec::Mode::kRotateInPlace
                                     : PathSpec::Mode::kWallScan;
  path.waypoints = opt.frames;

  const CameraIntrinsics intrinsics(opt.focal, opt.focal, opt.width / 2.0, opt.height / 2.0,
                                    opt.width, opt.height);
  const SurveyGroundTruth truth =
      make_survey(scene, path, intrinsics, opt.out, opt.seed, opt.threads);
  std::cout << "wrote " << opt.frames << " frames and " << truth.change_centroids.size()
            << " ground-truth changes to " << opt.out << "\n";
  return 0;
}

struct FilterOptions {
  std::string dataset;
  std::string out;
  MotionFilterParams params;
};

int cmd_filter(const FilterOptions& opt) {
  const SurveyDataset dataset = load_dataset(opt.dataset);
  std::vector<GrayImage> images;
  images.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    images.push_back(load_dataset_image(dataset, i));
  }
  const std::vector<int> kept = filter_low_movement(images, opt.params);
  const std::filesystem::path out_path =
      opt.out.empty() ? std::filesystem::path(opt.dataset) / "manifest.txt"
                      : std::filesystem::path(opt.out);
  save_manifest(kept, out_path);
  std::cout << "kept " << kept.size() << "/" << images.size() << " frames -> " << out_path
            << "\n";
  return 0;
}

struct DetectOptions {
  std::string dataset;
  std::string out;
  std::string manifest;
  DetectParams params;
  double sigma_px = 2.0;
  double tau2 = 11.82;
  double n_sigma = 3.0;
  bool debug_images = false;
};

int cmd_detect(DetectOptions& opt) {
  const SurveyDataset dataset = load_dataset(opt.dataset);
  const std::filesystem::path out_dir =
      opt.out.empty() ? std::filesystem::path(opt.dataset) / "out" : std::filesystem::path(opt.out);
  std::filesystem::create_directories(out_dir);

  opt.params.uncertainty = UncertaintyModel::isotropic(opt.sigma_px, opt.tau2);
  if (opt.debug_images) {
    opt.params.debug_dir = out_dir / "debug";
  }
  std::optional<std::vector<int>> manifest;
  if (!opt.manifest.empty()) {
    manifest = load_manifest(opt.manifest);
  }

  const DetectionResult result = run_detection(dataset, manifest, opt.params, &std::cerr);

  write_change_report(result.regions, out_dir / "changes.json");
  write_ply_ellipsoids(result.regions, out_dir / "changes.ply", opt.n_sigma);

  std::size_t confirmed_2d = 0;
  for (const auto& per_image : result.confirmed_2d) {
    confirmed_2d += per_image.size();
  }
  std::cout << "images: " << result.confirmed_2d.size()
            << "  pair comparisons: " << result.pair_comparisons
            << "  confirmed 2d regions: " << confirmed_2d
            << "  3d change regions: " << result.regions.size() << "\n";
  std::cout << "timing [s]: data loading " << result.timings.data_loading
            << " | inconsistencies " << result.timings.inconsistencies << " | 3d change "
            << result.timings.change_3d << "\n";
  std::cout << "wrote " << (out_dir / "changes.json") << " and " << (out_dir / "changes.ply")
            << "\n";
  return 0;
}

int cmd_info(const std::string& dataset_path) {
  const SurveyDataset dataset = load_dataset(dataset_path);
  const TriangleMesh mesh = load_obj(dataset.mesh_path);
  std::cout << "dataset: " << dataset.root << "\n";
  std::cout << "frames: " << dataset.size() << " at " << dataset.intrinsics.width() << "x"
            << dataset.intrinsics.height() << "\n";
  std::cout << "model: " << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
            << " triangles\n";
  const auto gt_path = dataset.root / "ground_truth.json";
  if (std::filesystem::exists(gt_path)) {
    std::cout << "ground truth changes: " << load_ground_truth(gt_path).size() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image-based geometric change detection against a 3D world model"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "fabricate a synthetic survey dataset");
  generate->add_option("--out", gen.out, "output dataset directory")->required();
  generate->add_option("--preset", gen.preset, "path preset: wall-scan | rotate")
      ->check(CLI::IsMember({"wall-scan", "rotate"}));
  generate->add_option("--change", gen.change, "change preset: none | cube");
  generate->add_option("--frames", gen.frames, "waypoint count")->check(CLI::PositiveNumber);
  generate->add_option("--width", gen.width, "image width [px]");
  generate->add_option("--height", gen.height, "image height [px]");
  generate->add_option("--focal", gen.focal, "focal length [px]");
  generate->add_option("--room", gen.room, "room size W D H [m]")->expected(3);
  generate->add_option("--cell", gen.cell, "texture checker cell [m]");
  generate->add_option("--noise", gen.noise, "image noise sigma [intensity]");
  generate->add_option("--pose-noise-rot", gen.pose_noise_rot_deg,
                       "emitted pose rotation noise [deg]");
  generate->add_option("--pose-noise-trans", gen.pose_noise_trans,
                       "emitted pose translation noise [m]");
  generate->add_option("--seed", gen.seed, "rng seed");
  generate->add_option("--threads", gen.threads, "worker threads (0 = hardware)");

  FilterOptions filt;
  CLI::App* filter = app.add_subcommand("filter", "remove low-movement frames");
  filter->add_option("--dataset", filt.dataset, "dataset directory")->required();
  filter->add_option("--out", filt.out, "manifest path (default <dataset>/manifest.txt)");
  filter->add_option("--max-features", filt.params.max_features);
  filter->add_option("--patch-radius", filt.params.patch_radius);
  filter->add_option("--pyramid-levels", filt.params.pyramid_levels);
  filter->add_option("--search-radius", filt.params.search_radius);
  filter->add_option("--displacement-threshold", filt.params.displacement_threshold);
  filter->add_option("--min-tracked-fraction", filt.params.min_tracked_fraction);

  DetectOptions det;
  CLI::App* detect = app.add_subcommand("detect", "detect changes against the model");
  detect->add_option("--dataset", det.dataset, "dataset directory")->required();
  detect->add_option("--out", det.out, "output directory (default <dataset>/out)");
  detect->add_option("--manifest", det.manifest, "kept-frame manifest from `filter`");
  detect->add_option("--m,--max-comparisons", det.params.inconsistency.max_comparisons,
                     "neighbors compared per image");
  detect->add_option("--min-confirming-pairs", det.params.inconsistency.min_confirming_pairs);
  detect->add_option("--theta,--intensity-threshold",
                     det.params.inconsistency.intensity_threshold);
  detect->add_option("--kernel-radius", det.params.inconsistency.kernel_radius);
  detect->add_option("--min-region-area", det.params.inconsistency.min_region_area);
  detect->add_option("--sigma-px", det.sigma_px, "re-projection pixel sigma");
  detect->add_option("--tau2", det.tau2, "chi-square gate");
  detect->add_option("--min-distance", det.params.prune_min_distance,
                     "near-camera pruning distance [m]");
  detect->add_option("--n-sigma", det.n_sigma, "ellipsoid scale in the PLY output");
  detect->add_flag("--debug-images", det.debug_images, "dump per-pair distance/mask PGMs");
  detect->add_option("--threads", det.params.threads, "worker threads (0 = hardware)");

  std::string info_dataset;
  CLI::App* info = app.add_subcommand("info", "print dataset summary");
  info->add_option("--dataset", info_dataset, "dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (generate->parsed()) {
      return cmd_generate(gen);
    }
    if (filter->parsed()) {
      return cmd_filter(filt);
    }
    if (detect->parsed()) {
      return cmd_detect(det);
    }
    if (info->parsed()) {
      return cmd_info(info_dataset);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
