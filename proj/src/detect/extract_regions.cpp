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

#include <vector>

#include "changedet/detect/inconsistency.hpp"

namespace changedet {

namespace {

using Mask = std::vector<std::uint8_t>;

// Separable square-kernel erosion; pixels outside the raster count as unset.
Mask erode(const Mask& mask, int width, int height, int radius) {
  Mask rows(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t all = 1;
      for (int dx = -radius; dx <= radius; ++dx) {
        const int sx = x + dx;
        if (sx < 0 || sx >= width || !mask[static_cast<std::size_t>(y) * width + sx]) {
          all = 0;
          break;
        }
      }
      rows[static_cast<std::size_t>(y) * width + x] = all;
    }
  }
  Mask out(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t all = 1;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int sy = y + dy;
        if (sy < 0 || sy >= height || !rows[static_cast<std::size_t>(sy) * width + x]) {
          all = 0;
          break;
        }
      }
      out[static_cast<std::size_t>(y) * width + x] = all;
    }
  }
  return out;
}

Mask dilate(const Mask& mask, int width, int height, int radius) {
  Mask rows(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t any = 0;
      for (int dx = -radius; dx <= radius; ++dx) {
        const int sx = x + dx;
        if (sx >= 0 && sx < width && mask[static_cast<std::size_t>(y) * width + sx]) {
          any = 1;
          break;
        }
      }
      rows[static_cast<std::size_t>(y) * width + x] = any;
    }
  }
  Mask out(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::uint8_t any = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int sy = y + dy;
        if (sy >= 0 && sy < height && rows[static_cast<std::size_t>(sy) * width + x]) {
          any = 1;
          break;
        }
      }
      out[static_cast<std::size_t>(y) * width + x] = any;
    }
  }
  return out;
}

}  // namespace

std::vector<ChangeRegion2D> extract_regions(const FloatImage& distance,
                                            const InconsistencyParams& params) {
  const int width = distance.width;
  const int height = distance.height;

  Mask mask(distance.pixel_count(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = distance.data[i] > params.intensity_threshold ? 1 : 0;
  }
  mask = erode(mask, width, height, params.kernel_radius);
  mask = dilate(mask, width, height, params.kernel_radius);

  // 8-connected component labeling by flood fill in scan order.
  std::vector<ChangeRegion2D> regions;
  std::vector<Eigen::Vector2i> frontier;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!mask[static_cast<std::size_t>(y) * width + x]) {
        continue;
      }
      ChangeRegion2D region;
      frontier.clear();
      frontier.emplace_back(x, y);
      mask[static_cast<std::size_t>(y) * width + x] = 0;
      while (!frontier.empty()) {
        const Eigen::Vector2i p = frontier.back();
        frontier.pop_back();
        region.pixels.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x() + dx;
            const int ny = p.y() + dy;
            if (nx < 0 || nx >= width || ny < 0 || ny >= height) {
              continue;
            }
            std::uint8_t& cell = mask[static_cast<std::size_t>(ny) * width + nx];
            if (cell) {
              cell = 0;
              frontier.emplace_back(nx, ny);
            }
          }
        }
      }
      if (static_cast<double>(region.pixels.size()) < params.min_region_area) {
        continue;
      }

      Vec2 sum = Vec2::Zero();
      for (const auto& p : region.pixels) {
        sum += p.cast<double>();
      }
      region.mean = sum / static_cast<double>(region.pixels.size());
      Mat2 scatter = Mat2::Zero();
      for (const auto& p : region.pixels) {
        const Vec2 d = p.cast<double>() - region.mean;
        scatter += d * d.transpose();
      }
      region.covariance = scatter / static_cast<double>(region.pixels.size());
      region.area = static_cast<double>(region.pixels.size());
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

}  // namespace changedet
