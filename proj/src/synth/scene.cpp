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

#include <array>

#include "changedet/errors.hpp"
#include "changedet/synth/synthetic.hpp"

namespace changedet {

namespace {

// Distinct base albedos so neighboring walls are distinguishable.
constexpr std::array<std::uint8_t, 6> kWallAlbedos = {210, 160, 185, 135, 235, 110};

void append_box(TriangleMesh& mesh, const Vec3& lo, const Vec3& hi,
                const std::array<std::uint8_t, 6>& face_albedos) {
  const int base = static_cast<int>(mesh.vertices.size());
  // 8 corners, bit k of the index selects hi on axis k.
  for (int corner = 0; corner < 8; ++corner) {
    mesh.vertices.emplace_back((corner & 1) ? hi.x() : lo.x(), (corner & 2) ? hi.y() : lo.y(),
                               (corner & 4) ? hi.z() : lo.z());
  }
  // Faces: -x +x -y +y -z +z, two triangles each.
  constexpr std::array<std::array<int, 4>, 6> kFaces = {{
      {0, 4, 6, 2},  // -x
      {1, 3, 7, 5},  // +x
      {0, 1, 5, 4},  // -y
      {2, 6, 7, 3},  // +y
      {0, 2, 3, 1},  // -z
      {4, 5, 7, 6},  // +z
  }};
  for (int face = 0; face < 6; ++face) {
    const auto& q = kFaces[face];
    mesh.triangles.push_back({base + q[0], base + q[1], base + q[2]});
    mesh.triangles.push_back({base + q[0], base + q[2], base + q[3]});
    mesh.albedo.push_back(face_albedos[face]);
    mesh.albedo.push_back(face_albedos[face]);
  }
}

void append_object(TriangleMesh& mesh, const BoxSpec& box) {
  std::array<std::uint8_t, 6> albedos;
  albedos.fill(box.albedo);
  append_box(mesh, box.center - box.half_extents, box.center + box.half_extents, albedos);
}

void check_inside_room(const BoxSpec& box, const Vec3& room_size) {
  const Vec3 lo = box.center - box.half_extents;
  const Vec3 hi = box.center + box.half_extents;
  for (int axis = 0; axis < 3; ++axis) {
    if (lo[axis] < 0.0 || hi[axis] > room_size[axis]) {
      throw ObjectOutsideRoom("object protrudes past the room walls");
    }
  }
}

TriangleMesh room_mesh(const SceneSpec& spec) {
  TriangleMesh mesh;
  append_box(mesh, Vec3::Zero(), spec.room_size, kWallAlbedos);
  return mesh;
}

}  // namespace

Scene build_scene(const SceneSpec& spec) {
  for (const BoxSpec& box : spec.model_objects) {
    check_inside_room(box, spec.room_size);
  }
  for (const BoxSpec& box : spec.change_objects) {
    check_inside_room(box, spec.room_size);
  }

  Scene scene;
  scene.model = room_mesh(spec);
  for (const BoxSpec& box : spec.model_objects) {
    append_object(scene.model, box);
  }
  scene.survey = scene.model;
  for (const BoxSpec& box : spec.change_objects) {
    append_object(scene.survey, box);
    scene.change_centroids.push_back(box.center);
  }
  scene.model.remove_degenerate_triangles();
  scene.survey.remove_degenerate_triangles();
  return scene;
}

std::vector<Pose> make_path(const PathSpec& path, const SceneSpec& scene) {
  const Vec3& room = scene.room_size;
  std::vector<Pose> poses;
  poses.reserve(path.waypoints);

  // Camera basis: z forward, x image-right, y image-down (world z is up).
  auto look_at = [](const Vec3& center, const Vec3& target) {
    const Vec3 forward = (target - center).normalized();
    Vec3 up_hint = Vec3::UnitZ();
    if (std::abs(forward.dot(up_hint)) > 0.99) {
      up_hint = Vec3::UnitY();
    }
    const Vec3 right = forward.cross(up_hint).normalized();
    const Vec3 down = forward.cross(right);
    Mat3 rotation;
    rotation.col(0) = right;
    rotation.col(1) = down;
    rotation.col(2) = forward;
    return Pose(orthonormalize_rotation(rotation), center);
  };

  if (path.mode == PathSpec::Mode::kWallScan) {
    // Translate along x at fixed height, facing the +y wall.
    const double y = 0.35 * room.y();
    const double z = 0.5 * room.z();
    for (int i = 0; i < path.waypoints; ++i) {
      const double s = path.waypoints == 1 ? 0.5
                                           : static_cast<double>(i) / (path.waypoints - 1);
      const double x = (0.2 + 0.6 * s) * room.x();
      poses.push_back(look_at(Vec3(x, y, z), Vec3(x, room.y(), z)));
    }
  } else {
    const Vec3 center(0.5 * room.x(), 0.5 * room.y(), 0.5 * room.z());
    for (int i = 0; i < path.waypoints; ++i) {
      const double angle = 2.0 * EIGEN_PI * i / path.waypoints;
      poses.push_back(look_at(center, center + Vec3(std::cos(angle), std::sin(angle), 0.0)));
    }
  }
  return poses;
}

}  // namespace changedet
