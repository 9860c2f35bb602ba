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

#include "changedet/io/text_formats.hpp"

#include <fstream>
#include <vector>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

constexpr double kPoseDriftTol = 1e-6;

std::vector<double> read_numbers(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(token, &pos);
    } catch (const std::exception&) {
      throw ParseError("non-numeric token '" + token + "' in " + path.string());
    }
    if (pos != token.size()) {
      throw ParseError("non-numeric token '" + token + "' in " + path.string());
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

Pose load_pose_file(const std::filesystem::path& path) {
  const std::vector<double> v = read_numbers(path);
  if (v.size() != 12) {
    throw WrongCount("pose file must hold 12 numbers, got " + std::to_string(v.size()) + " in " +
                     path.string());
  }
  Mat3 r;
  Vec3 t;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      r(row, col) = v[row * 4 + col];
    }
    t(row) = v[row * 4 + 3];
  }
  const Mat3 residual = r.transpose() * r - Mat3::Identity();
  if (residual.cwiseAbs().maxCoeff() > kPoseDriftTol || r.determinant() < 0.0) {
    throw NotARotation("rotation drift exceeds tolerance in " + path.string());
  }
  return Pose(orthonormalize_rotation(r), t);
}

void save_pose_file(const Pose& pose, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.precision(17);
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      out << pose.rotation()(row, col) << " ";
    }
    out << pose.translation()(row) << "\n";
  }
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

CameraIntrinsics load_intrinsics(const std::filesystem::path& path) {
  const std::vector<double> v = read_numbers(path);
  if (v.size() != 6) {
    throw WrongCount("intrinsics file must hold 6 numbers, got " + std::to_string(v.size()) +
                     " in " + path.string());
  }
  return CameraIntrinsics(v[0], v[1], v[2], v[3], static_cast<int>(v[4]),
                          static_cast<int>(v[5]));
}

void save_intrinsics(const CameraIntrinsics& k, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.precision(17);
  out << k.fx() << " " << k.fy() << " " << k.cx() << " " << k.cy() << " " << k.width() << " "
      << k.height() << "\n";
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

}  // namespace changedet
