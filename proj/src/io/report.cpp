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

#include "changedet/io/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>

#include <json.hpp>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

std::vector<ChangeRegion3D> sorted_for_report(std::vector<ChangeRegion3D> regions) {
  std::sort(regions.begin(), regions.end(), [](const ChangeRegion3D& a, const ChangeRegion3D& b) {
    if (a.support.size() != b.support.size()) {
      return a.support.size() > b.support.size();
    }
    return std::make_tuple(a.mean.x(), a.mean.y(), a.mean.z()) <
           std::make_tuple(b.mean.x(), b.mean.y(), b.mean.z());
  });
  return regions;
}

// Unit icosphere with `subdivisions` rounds of edge splitting. Two rounds
// yield 162 unique vertices.
std::vector<Vec3> icosphere_vertices(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (Vec3& v : verts) {
    v.normalize();
  }
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };

  for (int round = 0; round < subdivisions; ++round) {
    std::map<std::pair<int, int>, int> midpoint;
    auto split = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) {
        return it->second;
      }
      const int id = static_cast<int>(verts.size());
      verts.push_back((0.5 * (verts[a] + verts[b])).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * faces.size());
    for (const auto& f : faces) {
      const int ab = split(f[0], f[1]);
      const int bc = split(f[1], f[2]);
      const int ca = split(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  return verts;
}

}  // namespace

void write_change_report(const std::vector<ChangeRegion3D>& regions,
                         const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const ChangeRegion3D& region : sorted_for_report(regions)) {
    nlohmann::json entry;
    entry["mean"] = {region.mean.x(), region.mean.y(), region.mean.z()};
    std::vector<double> cov(9);
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        cov[row * 3 + col] = region.covariance(row, col);
      }
    }
    entry["covariance"] = cov;
    entry["support"] = region.support;
    entry["pixel_area"] = region.pixel_area;
    doc.push_back(entry);
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << doc.dump(2) << "\n";
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

std::vector<ChangeRegion3D> read_change_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid change report " + path.string() + ": " + e.what());
  }
  std::vector<ChangeRegion3D> regions;
  for (const auto& entry : doc) {
    ChangeRegion3D region;
    for (int i = 0; i < 3; ++i) {
      region.mean(i) = entry.at("mean").at(i).get<double>();
    }
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        region.covariance(row, col) = entry.at("covariance").at(row * 3 + col).get<double>();
      }
    }
    region.support = entry.at("support").get<std::vector<int>>();
    region.pixel_area = entry.at("pixel_area").get<double>();
    regions.push_back(std::move(region));
  }
  return regions;
}

void write_ply_ellipsoids(const std::vector<ChangeRegion3D>& regions,
                          const std::filesystem::path& path, double n_sigma) {
  static const std::vector<Vec3> unit_sphere = icosphere_vertices(2);

  // Validate all covariances before writing anything.
  std::vector<Mat3> sqrt_covs;
  sqrt_covs.reserve(regions.size());
  for (const ChangeRegion3D& region : regions) {
    Eigen::SelfAdjointEigenSolver<Mat3> eig(region.covariance);
    const Vec3 evals = eig.eigenvalues();
    const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
    if (evals.minCoeff() < -1e-9 * scale) {
      throw NonPositiveDefiniteCovariance("change covariance has a negative eigenvalue");
    }
    sqrt_covs.push_back(eig.eigenvectors() * evals.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                        eig.eigenvectors().transpose());
  }

  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.precision(17);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << regions.size() * unit_sphere.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\nend_header\n";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (const Vec3& u : unit_sphere) {
      const Vec3 p = regions[i].mean + n_sigma * (sqrt_covs[i] * u);
      out << p.x() << " " << p.y() << " " << p.z() << "\n";
    }
  }
  if (!out) {
    throw IoError("short write to " + path.string());
  }
}

}  // namespace changedet
