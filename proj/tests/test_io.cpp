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

#include "changedet/errors.hpp"
#include "changedet/io/obj.hpp"
#include "changedet/io/pgm.hpp"
#include "changedet/io/report.hpp"
#include "changedet/io/text_formats.hpp"

using namespace changedet;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "changedet_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("pgm: 2x2 image round-trips byte-identically") {
  const auto dir = temp_dir();
  GrayImage img(2, 2);
  img.data = {0, 255, 128, 64};
  save_pgm(img, dir / "tiny.pgm");
  const GrayImage loaded = load_pgm(dir / "tiny.pgm");
  CHECK(loaded.width == 2);
  CHECK(loaded.height == 2);
  CHECK(loaded.data == img.data);

  save_pgm(loaded, dir / "tiny2.pgm");
  CHECK(read_file(dir / "tiny.pgm") == read_file(dir / "tiny2.pgm"));
}

TEST_CASE("pgm: header comments and whitespace are tolerated") {
  const auto dir = temp_dir();
  write_file(dir / "comment.pgm", "P5 # a comment\n# another\n 2\t2\n255\nabcd");
  const GrayImage img = load_pgm(dir / "comment.pgm");
  CHECK(img.width == 2);
  CHECK(img.data == std::vector<std::uint8_t>{'a', 'b', 'c', 'd'});
}

TEST_CASE("pgm: rejects 16-bit, truncated and malformed files") {
  const auto dir = temp_dir();
  write_file(dir / "deep.pgm", "P5\n2 2\n65535\nxxxxxxxx");
  CHECK_THROWS_AS(load_pgm(dir / "deep.pgm"), UnsupportedMaxval);

  write_file(dir / "short.pgm", "P5\n2 2\n255\nab");
  CHECK_THROWS_AS(load_pgm(dir / "short.pgm"), TruncatedData);

  write_file(dir / "ascii.pgm", "P2\n2 2\n255\n0 0 0 0");
  CHECK_THROWS_AS(load_pgm(dir / "ascii.pgm"), MalformedHeader);

  write_file(dir / "negative.pgm", "P5\n-2 2\n255\nabcd");
  CHECK_THROWS_AS(load_pgm(dir / "negative.pgm"), MalformedHeader);

  CHECK_THROWS_AS(load_pgm(dir / "does_not_exist.pgm"), IoError);
}

TEST_CASE("obj: two-triangle unit square") {
  const auto dir = temp_dir();
  write_file(dir / "square.obj",
             "# unit square\n"
             "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
             "f 1 2 3\nf 1 3 4\n");
  const TriangleMesh mesh = load_obj(dir / "square.obj");
  CHECK(mesh.vertices.size() == 4);
  CHECK(mesh.triangles.size() == 2);
}

TEST_CASE("obj: quad faces fan-triangulate, negative indices resolve") {
  const auto dir = temp_dir();
  write_file(dir / "quad.obj",
             "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
             "f 1 2 3 4\n"
             "f -4 -3 -2\n");
  const TriangleMesh mesh = load_obj(dir / "quad.obj");
  REQUIRE(mesh.triangles.size() == 3);
  CHECK(mesh.triangles[0] == std::array<int, 3>{0, 1, 2});
  CHECK(mesh.triangles[1] == std::array<int, 3>{0, 2, 3});
  CHECK(mesh.triangles[2] == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("obj: face token forms and ignored directives") {
  const auto dir = temp_dir();
  write_file(dir / "forms.obj",
             "o thing\nvn 0 0 1\nvt 0 0\ns off\n"
             "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
             "f 1/1 2/1/1 3//1\n");
  const TriangleMesh mesh = load_obj(dir / "forms.obj");
  CHECK(mesh.triangles.size() == 1);
}

TEST_CASE("obj: bad faces are rejected") {
  const auto dir = temp_dir();
  write_file(dir / "zero.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n");
  CHECK_THROWS_AS(load_obj(dir / "zero.obj"), IndexOutOfRange);

  write_file(dir / "big.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n");
  CHECK_THROWS_AS(load_obj(dir / "big.obj"), IndexOutOfRange);

  write_file(dir / "two_index.obj", "v 0 0 0\nv 1 0 0\nf 1 2\n");
  CHECK_THROWS_AS(load_obj(dir / "two_index.obj"), NonPolygonalFace);
}

TEST_CASE("obj: degenerate triangles are cleaned at load") {
  const auto dir = temp_dir();
  write_file(dir / "sliver.obj",
             "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\n"
             "f 1 2 3\n"
             "f 1 2 4\n");  // collinear, zero area
  const TriangleMesh mesh = load_obj(dir / "sliver.obj");
  CHECK(mesh.triangles.size() == 1);
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    CHECK(mesh.triangle_area(static_cast<int>(i)) > kMinTriangleArea);
  }
}

TEST_CASE("obj: save/load round trip preserves geometry") {
  const auto dir = temp_dir();
  TriangleMesh mesh;
  mesh.vertices = {Vec3(0.125, -3.5, 7.0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  mesh.triangles = {{0, 1, 2}};
  save_obj(mesh, dir / "roundtrip.obj");
  const TriangleMesh loaded = load_obj(dir / "roundtrip.obj");
  REQUIRE(loaded.vertices.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK((loaded.vertices[i] - mesh.vertices[i]).norm() == 0.0);
  }
}

TEST_CASE("pose file: identity, wrong count, mirror rotation") {
  const auto dir = temp_dir();
  write_file(dir / "id.pose.txt", "1 0 0 0  0 1 0 0  0 0 1 0");
  const Pose pose = load_pose_file(dir / "id.pose.txt");
  CHECK((pose.rotation() - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(pose.translation().norm() == 0.0);

  write_file(dir / "eleven.pose.txt", "1 0 0 0  0 1 0 0  0 0 1");
  CHECK_THROWS_AS(load_pose_file(dir / "eleven.pose.txt"), WrongCount);

  write_file(dir / "mirror.pose.txt", "1 0 0 0  0 1 0 0  0 0 -1 0");
  CHECK_THROWS_AS(load_pose_file(dir / "mirror.pose.txt"), NotARotation);

  write_file(dir / "junk.pose.txt", "1 0 0 0  0 1 0 0  0 0 one 0");
  CHECK_THROWS_AS(load_pose_file(dir / "junk.pose.txt"), ParseError);
}

TEST_CASE("pose file: small drift is re-orthonormalized, large drift rejected") {
  const auto dir = temp_dir();
  write_file(dir / "drift.pose.txt", "1.0000004 0 0 0.5  0 1 0 -0.25  0 0 1 3.0");
  const Pose pose = load_pose_file(dir / "drift.pose.txt");
  CHECK(is_rotation(pose.rotation(), 1e-9));
  CHECK((pose.translation() - Vec3(0.5, -0.25, 3.0)).norm() == 0.0);

  write_file(dir / "bad.pose.txt", "1.1 0 0 0  0 1 0 0  0 0 1 0");
  CHECK_THROWS_AS(load_pose_file(dir / "bad.pose.txt"), NotARotation);
}

TEST_CASE("pose file: save/load round trip") {
  const auto dir = temp_dir();
  const Mat3 r = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  const Pose pose(r, Vec3(0.1, -2.5, 4.0));
  save_pose_file(pose, dir / "rt.pose.txt");
  const Pose loaded = load_pose_file(dir / "rt.pose.txt");
  CHECK((loaded.rotation() - pose.rotation()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((loaded.translation() - pose.translation()).norm() < 1e-15);
}

TEST_CASE("intrinsics file: nominal, invalid principal point, junk token") {
  const auto dir = temp_dir();
  write_file(dir / "k.txt", "600 600 640 480 1280 960");
  const CameraIntrinsics k = load_intrinsics(dir / "k.txt");
  CHECK(k.fx() == 600.0);
  CHECK(k.width() == 1280);
  CHECK(k.height() == 960);

  write_file(dir / "bad_cx.txt", "600 600 1280 480 1280 960");
  CHECK_THROWS_AS(load_intrinsics(dir / "bad_cx.txt"), InvalidIntrinsics);

  write_file(dir / "junk.txt", "600 600 sixforty 480 1280 960");
  CHECK_THROWS_AS(load_intrinsics(dir / "junk.txt"), ParseError);

  write_file(dir / "five.txt", "600 600 640 480 1280");
  CHECK_THROWS_AS(load_intrinsics(dir / "five.txt"), WrongCount);
}

TEST_CASE("change report: empty list, single region, reload, determinism") {
  const auto dir = temp_dir();
  write_change_report({}, dir / "empty.json");
  CHECK(read_change_report(dir / "empty.json").empty());
  const std::string text = read_file(dir / "empty.json");
  CHECK(text.find('[') != std::string::npos);
  CHECK(text.find('{') == std::string::npos);

  ChangeRegion3D region;
  region.mean = Vec3(1.25, -0.5, 3.75);
  region.covariance << 0.04, 0.001, 0, 0.001, 0.02, 0, 0, 0, 0.09;
  region.support = {0, 2, 3};
  region.pixel_area = 512.0;
  write_change_report({region}, dir / "one.json");
  const auto reloaded = read_change_report(dir / "one.json");
  REQUIRE(reloaded.size() == 1);
  CHECK((reloaded[0].mean - region.mean).norm() < 1e-12);
  CHECK((reloaded[0].covariance - region.covariance).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(reloaded[0].support == region.support);
  CHECK(reloaded[0].pixel_area == 512.0);

  write_change_report({region}, dir / "one_again.json");
  CHECK(read_file(dir / "one.json") == read_file(dir / "one_again.json"));
}

TEST_CASE("change report: ordering by support then mean") {
  const auto dir = temp_dir();
  ChangeRegion3D small_support;
  small_support.mean = Vec3(0, 0, 0);
  small_support.support = {1};
  ChangeRegion3D big_support;
  big_support.mean = Vec3(5, 0, 0);
  big_support.support = {0, 1, 2};
  ChangeRegion3D big_support_later_mean;
  big_support_later_mean.mean = Vec3(9, 0, 0);
  big_support_later_mean.support = {3, 4, 5};

  write_change_report({small_support, big_support_later_mean, big_support}, dir / "order.json");
  const auto reloaded = read_change_report(dir / "order.json");
  REQUIRE(reloaded.size() == 3);
  CHECK(reloaded[0].mean.x() == 5.0);
  CHECK(reloaded[1].mean.x() == 9.0);
  CHECK(reloaded[2].mean.x() == 0.0);
}

TEST_CASE("ply ellipsoids: unit sphere, axis stretch, rejection") {
  const auto dir = temp_dir();
  ChangeRegion3D region;
  region.mean = Vec3(1, 2, 3);
  region.covariance = Mat3::Identity();

  write_ply_ellipsoids({region}, dir / "sphere.ply", 1.0);
  std::ifstream in(dir / "sphere.ply");
  std::string line;
  std::getline(in, line);
  CHECK(line == "ply");
  std::getline(in, line);
  CHECK(line == "format ascii 1.0");
  std::getline(in, line);
  CHECK(line == "element vertex 162");
  for (int skip = 0; skip < 4; ++skip) {
    std::getline(in, line);
  }
  CHECK(line == "end_header");

  int count = 0;
  double x, y, z;
  while (in >> x >> y >> z) {
    const double r = (Vec3(x, y, z) - region.mean).norm();
    CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
    ++count;
  }
  CHECK(count == 162);

  region.covariance = Vec3(4.0, 1.0, 1.0).asDiagonal();
  write_ply_ellipsoids({region}, dir / "stretch.ply", 1.0);
  std::ifstream in2(dir / "stretch.ply");
  for (int skip = 0; skip < 7; ++skip) {
    std::getline(in2, line);
  }
  double max_r = 0;
  double max_abs_x = 0;
  while (in2 >> x >> y >> z) {
    max_r = std::max(max_r, (Vec3(x, y, z) - region.mean).norm());
    max_abs_x = std::max(max_abs_x, std::abs(x - region.mean.x()));
  }
  CHECK(max_r == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(max_abs_x == doctest::Approx(2.0).epsilon(1e-9));

  region.covariance = Vec3(1.0, 1.0, -0.5).asDiagonal();
  CHECK_THROWS_AS(write_ply_ellipsoids({region}, dir / "bad.ply", 1.0),
                  NonPositiveDefiniteCovariance);
}
