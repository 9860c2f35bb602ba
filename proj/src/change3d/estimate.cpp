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

#include "changedet/change3d/estimate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "changedet/change3d/sigma_points.hpp"
#include "changedet/change3d/triangulate.hpp"
#include "changedet/errors.hpp"

namespace changedet {

namespace {

int find_root(std::vector<int>& parent, int a) {
  while (parent[a] != a) {
    parent[a] = parent[parent[a]];
    a = parent[a];
  }
  return a;
}

bool gate_passes(const Vec2& delta, const Mat2& covariance, double tau2) {
  if (delta.squaredNorm() < 1e-12) {
    return true;  // coincident means gate in under any covariance
  }
  const double det = covariance.determinant();
  if (!(det > 1e-12)) {
    return false;
  }
  return delta.dot(covariance.inverse() * delta) < tau2;
}

// Re-projects region a's mean into region b's image through the model and
// gates it against b's pixel covariance.
bool model_mediated_match(const ChangeRegion2D& a, const ChangeRegion2D& b,
                          const std::vector<Pose>& poses,
                          const std::vector<ProjectionMatrix>& projections,
                          const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                          const Bvh& bvh, double tau2) {
  const Ray ray = back_project(intrinsics, poses[a.image_index], a.mean);
  const auto hit = bvh.intersect(mesh, ray);
  if (!hit) {
    return false;
  }
  const auto projected = project(projections[b.image_index], hit->point);
  if (!projected) {
    return false;
  }
  return gate_passes(projected->pixel - b.mean, b.covariance, tau2);
}

// True when the point is not hidden behind model geometry seen from the
// camera. Changes sitting on a surface pass via the 1 cm slack.
bool visible_from(const Vec3& point, const Pose& pose, const TriangleMesh& mesh, const Bvh& bvh) {
  const Vec3 to_point = point - pose.translation();
  const double distance = to_point.norm();
  if (distance <= kRayEpsilon) {
    return true;
  }
  const auto hit = bvh.intersect(mesh, Ray{pose.translation(), to_point / distance});
  return !hit || hit->t >= distance - 0.01;
}

// Two regions match when either their mean rays meet on the model surface
// (works for any baseline) or their two-view triangulation is a visible
// point that re-projects inside both region gates.
bool cross_view_match(const ChangeRegion2D& a, const ChangeRegion2D& b,
                      const std::vector<Pose>& poses,
                      const std::vector<ProjectionMatrix>& projections,
                      const CameraIntrinsics& intrinsics, const TriangleMesh& mesh,
                      const Bvh& bvh, double tau2) {
  if (model_mediated_match(a, b, poses, projections, intrinsics, mesh, bvh, tau2) &&
      model_mediated_match(b, a, poses, projections, intrinsics, mesh, bvh, tau2)) {
    return true;
  }
  Vec3 point;
  try {
    point = triangulate({{a.mean, projections[a.image_index]},
                         {b.mean, projections[b.image_index]}})
                .point;
  } catch (const Error&) {
    return false;
  }
  if (!visible_from(point, poses[a.image_index], mesh, bvh) ||
      !visible_from(point, poses[b.image_index], mesh, bvh)) {
    return false;
  }
  const auto in_a = project(projections[a.image_index], point);
  const auto in_b = project(projections[b.image_index], point);
  return in_a && in_b && gate_passes(in_a->pixel - a.mean, a.covariance, tau2) &&
         gate_passes(in_b->pixel - b.mean, b.covariance, tau2);
}

}  // namespace

std::vector<ChangeRegion3D> estimate_change_regions(const std::vector<ChangeRegion2D>& confirmed,
                                                    const std::vector<Pose>& poses,
                                                    const CameraIntrinsics& intrinsics,
                                                    const TriangleMesh& mesh, const Bvh& bvh,
                                                    const UncertaintyModel& uncertainty,
                                                    std::ostream* log) {
  std::vector<ProjectionMatrix> projections;
  projections.reserve(poses.size());
  for (const Pose& pose : poses) {
    projections.push_back(projection_matrix(intrinsics, pose));
  }

  // Cross-view association: mutual gate through the model.
  const int n = static_cast<int>(confirmed.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (confirmed[a].image_index == confirmed[b].image_index) {
        continue;
      }
      if (cross_view_match(confirmed[a], confirmed[b], poses, projections, intrinsics, mesh, bvh,
                           uncertainty.tau2())) {
        parent[find_root(parent, a)] = find_root(parent, b);
      }
    }
  }

  std::vector<std::vector<int>> groups(n);
  for (int a = 0; a < n; ++a) {
    groups[find_root(parent, a)].push_back(a);
  }

  std::vector<ChangeRegion3D> regions;
  for (const auto& group : groups) {
    if (group.empty()) {
      continue;
    }
    std::set<int> group_images;
    for (int idx : group) {
      group_images.insert(confirmed[idx].image_index);
    }
    if (group_images.size() < 2) {
      continue;  // a single view cannot resolve depth
    }

    // Consensus member selection: a group may hold several blobs per image
    // and re-projection echoes from views that never saw the change
    // directly. Each round seeds two-view triangulations from the remaining
    // members and keeps the subset (at most one blob per image, nearest
    // wins) spanning the most images; ties go to the subset with the most
    // pixel evidence, then the smallest total gate distance. One group
    // yields at most one region; rounds continue only past triangulation
    // failures.
    const std::size_t regions_before = regions.size();
    std::vector<int> remaining = group;
    while (remaining.size() >= 2 && regions.size() == regions_before) {
      std::vector<int> best_members;
      double best_total_area = 0;
      double best_total_mahal = 0;
      for (std::size_t a = 0; a < remaining.size(); ++a) {
        for (std::size_t b = a + 1; b < remaining.size(); ++b) {
          const ChangeRegion2D& ra = confirmed[remaining[a]];
          const ChangeRegion2D& rb = confirmed[remaining[b]];
          if (ra.image_index == rb.image_index) {
            continue;
          }
          Vec3 seed;
          try {
            seed = triangulate({{ra.mean, projections[ra.image_index]},
                                {rb.mean, projections[rb.image_index]}})
                       .point;
          } catch (const Error&) {
            continue;
          }
          std::map<int, std::pair<double, int>> per_image;  // image -> (mahal, member)
          for (int idx : remaining) {
            const ChangeRegion2D& r = confirmed[idx];
            const auto projected = project(projections[r.image_index], seed);
            if (!projected) {
              continue;
            }
            const double mahal = uncertainty.mahalanobis_sq(projected->pixel - r.mean);
            if (mahal >= uncertainty.tau2() ||
                !visible_from(seed, poses[r.image_index], mesh, bvh)) {
              continue;
            }
            const auto it = per_image.find(r.image_index);
            if (it == per_image.end() || mahal < it->second.first) {
              per_image[r.image_index] = {mahal, idx};
            }
          }
          double total_mahal = 0;
          double total_area = 0;
          for (const auto& [image_index, entry] : per_image) {
            total_mahal += entry.first;
            total_area += confirmed[entry.second].area;
          }
          const bool better =
              per_image.size() > best_members.size() ||
              (per_image.size() == best_members.size() && !best_members.empty() &&
               (total_area > best_total_area ||
                (total_area == best_total_area && total_mahal < best_total_mahal)));
          if (better) {
            best_members.clear();
            for (const auto& [image_index, entry] : per_image) {
              best_members.push_back(entry.second);
            }
            best_total_area = total_area;
            best_total_mahal = total_mahal;
          }
        }
      }
      if (best_members.size() < 2) {
        break;
      }

      try {
        std::vector<SigmaPoints2> view_points;
        view_points.reserve(best_members.size());
        for (int idx : best_members) {
          view_points.push_back(sigma_points(confirmed[idx].mean, confirmed[idx].covariance));
        }

        std::array<Vec3, 5> triangulated;
        for (int k = 0; k < 5; ++k) {
          std::vector<PixelObservation> observations;
          observations.reserve(best_members.size());
          for (std::size_t i = 0; i < best_members.size(); ++i) {
            observations.emplace_back(view_points[i].points[k],
                                      projections[confirmed[best_members[i]].image_index]);
          }
          triangulated[k] = triangulate(observations).point;
        }

        ChangeRegion3D region;
        region.mean = Vec3::Zero();
        for (const Vec3& p : triangulated) {
          region.mean += p;
        }
        region.mean /= 5.0;
        region.covariance = Mat3::Zero();
        for (int k = 1; k < 5; ++k) {
          const Vec3 d = triangulated[k] - region.mean;
          region.covariance += SigmaPoints2::outer_weight() * d * d.transpose();
        }
        for (int idx : best_members) {
          region.support.push_back(confirmed[idx].image_index);
          region.pixel_area += confirmed[idx].area;
        }
        std::sort(region.support.begin(), region.support.end());
        regions.push_back(std::move(region));
      } catch (const Error& e) {
        if (log != nullptr) {
          *log << "dropped change candidate spanning " << best_members.size()
               << " views: " << e.what() << "\n";
        }
      }
      // Emitted or failed, these members are settled.
      std::vector<int> next;
      for (int idx : remaining) {
        if (std::find(best_members.begin(), best_members.end(), idx) == best_members.end()) {
          next.push_back(idx);
        }
      }
      remaining = std::move(next);
    }
    if (regions.size() == regions_before && log != nullptr) {
      *log << "dropped change group spanning " << group_images.size()
           << " views: no projectively consistent view pair\n";
    }
  }
  return regions;
}

std::vector<ChangeRegion3D> prune_near_camera(const std::vector<ChangeRegion3D>& regions,
                                              const std::vector<Pose>& poses,
                                              double min_distance) {
  std::vector<ChangeRegion3D> kept;
  kept.reserve(regions.size());
  for (const ChangeRegion3D& region : regions) {
    bool near_camera = false;
    for (int support : region.support) {
      if (support >= 0 && support < static_cast<int>(poses.size()) &&
          (region.mean - poses[support].translation()).norm() < min_distance) {
        near_camera = true;
        break;
      }
    }
    if (!near_camera) {
      kept.push_back(region);
    }
  }
  return kept;
}

}  // namespace changedet
