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

#include "changedet/detect/inconsistency.hpp"

#include <cmath>

#include "changedet/errors.hpp"
#include "changedet/parallel.hpp"

namespace changedet {

UncertaintyModel::UncertaintyModel() : UncertaintyModel(4.0 * Mat2::Identity(), 11.82) {}

UncertaintyModel::UncertaintyModel(const Mat2& pixel_covariance, double tau2)
    : covariance_(pixel_covariance), tau2_(tau2) {
  if (!(tau2_ > 0.0)) {
    throw NonPsdCovariance("tau2 must be positive");
  }
  const double det = covariance_.determinant();
  if (!(covariance_(0, 0) > 0.0) || !(det > 0.0) ||
      covariance_(0, 1) != covariance_(1, 0)) {
    throw NonPsdCovariance("pixel covariance must be symmetric positive-definite");
  }
  information_ = covariance_.inverse();
}

UncertaintyModel UncertaintyModel::isotropic(double sigma_px, double tau2) {
  return UncertaintyModel(sigma_px * sigma_px * Mat2::Identity(), tau2);
}

void InconsistencyParams::validate() const {
  if (!(intensity_threshold > 0.0) || kernel_radius < 1 || !(min_region_area > 0.0) ||
      max_comparisons < 1 || min_confirming_pairs < 1) {
    throw Error("inconsistency parameters must all be positive");
  }
}

double UncertaintyModel::mahalanobis_sq(const Vec2& delta) const {
  return delta.dot(information_ * delta);
}

std::vector<Eigen::Vector2i> UncertaintyModel::gate_offsets() const {
  // Ellipse bounding box half extents: sqrt(tau2 * Sigma_ii).
  const int hx = static_cast<int>(std::floor(std::sqrt(tau2_ * covariance_(0, 0))));
  const int hy = static_cast<int>(std::floor(std::sqrt(tau2_ * covariance_(1, 1))));
  std::vector<Eigen::Vector2i> offsets;
  for (int dy = -hy; dy <= hy; ++dy) {
    for (int dx = -hx; dx <= hx; ++dx) {
      if (mahalanobis_sq(Vec2(dx, dy)) < tau2_) {
        offsets.emplace_back(dx, dy);
      }
    }
  }
  return offsets;
}

FloatImage inconsistency_distance(const GrayImage& dst, const WarpedImage& warped,
                                  const UncertaintyModel& uncertainty, int threads) {
  if (dst.width != warped.image.width || dst.height != warped.image.height) {
    throw DimensionMismatch("destination and warped images differ in size");
  }
  const std::vector<Eigen::Vector2i> offsets = uncertainty.gate_offsets();
  const int width = dst.width;
  const int height = dst.height;
  FloatImage distance(width, height, 0.f);

  parallel_chunks(0, height, threads, [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < width; ++x) {
        if (!warped.is_valid(x, y)) {
          continue;
        }
        const int observed = dst.at(x, y);
        int best = 255;
        for (const auto& offset : offsets) {
          const int zx = x + offset.x();
          const int zy = y + offset.y();
          if (zx < 0 || zx >= width || zy < 0 || zy >= height || !warped.is_valid(zx, zy)) {
            continue;
          }
          const int diff = std::abs(observed - static_cast<int>(warped.image.at(zx, zy)));
          if (diff < best) {
            best = diff;
            if (best == 0) {
              break;
            }
          }
        }
        distance.at(x, y) = static_cast<float>(best);
      }
    }
  });
  return distance;
}

}  // namespace changedet
