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

#include "changedet/motion/motion_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

constexpr double kMinCornerScore = 1e-9;
constexpr double kMaxResidualFraction = 0.2;

struct GradientField {
  std::vector<float> gx;
  std::vector<float> gy;
  int width = 0;
  int height = 0;
};

GradientField central_gradients(const GrayImage& img) {
  GradientField g;
  g.width = img.width;
  g.height = img.height;
  g.gx.assign(img.pixel_count(), 0.f);
  g.gy.assign(img.pixel_count(), 0.f);
  for (int y = 1; y < img.height - 1; ++y) {
    for (int x = 1; x < img.width - 1; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * img.width + x;
      g.gx[idx] = 0.5f * (img.at(x + 1, y) - img.at(x - 1, y));
      g.gy[idx] = 0.5f * (img.at(x, y + 1) - img.at(x, y - 1));
    }
  }
  return g;
}

// Min eigenvalue of the structure tensor over a binomially weighted 5x5
// window. Center weighting keeps the response peaked at corner centers
// instead of forming flat plateaus.
double min_eig_score(const GradientField& g, int cx, int cy) {
  static constexpr double kW[5] = {1.0, 4.0, 6.0, 4.0, 1.0};
  double a = 0, b = 0, c = 0;
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      const std::size_t idx = static_cast<std::size_t>(cy + dy) * g.width + (cx + dx);
      const double w = kW[dy + 2] * kW[dx + 2];
      const double gx = g.gx[idx];
      const double gy = g.gy[idx];
      a += w * gx * gx;
      b += w * gx * gy;
      c += w * gy * gy;
    }
  }
  const double trace_half = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return trace_half - disc;
}

GrayImage downsample_half(const GrayImage& img) {
  GrayImage out(std::max(1, img.width / 2), std::max(1, img.height / 2));
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const int sx = 2 * x;
      const int sy = 2 * y;
      const int sx1 = std::min(sx + 1, img.width - 1);
      const int sy1 = std::min(sy + 1, img.height - 1);
      const int sum = img.at(sx, sy) + img.at(sx1, sy) + img.at(sx, sy1) + img.at(sx1, sy1);
      out.at(x, y) = static_cast<std::uint8_t>((sum + 2) / 4);
    }
  }
  return out;
}

// Integer-sampled square patch; nullopt when it does not fit the raster.
struct Patch {
  std::vector<std::uint8_t> values;
  int radius = 0;
};

bool extract_patch(const GrayImage& img, int cx, int cy, int radius, Patch* patch) {
  if (cx - radius < 0 || cy - radius < 0 || cx + radius >= img.width || cy + radius >= img.height) {
    return false;
  }
  const int side = 2 * radius + 1;
  patch->radius = radius;
  patch->values.resize(static_cast<std::size_t>(side) * side);
  std::size_t k = 0;
  for (int y = cy - radius; y <= cy + radius; ++y) {
    for (int x = cx - radius; x <= cx + radius; ++x) {
      patch->values[k++] = img.at(x, y);
    }
  }
  return true;
}

// Sum of squared differences against the patch centered at (cx, cy) in img.
long long patch_ssd(const GrayImage& img, const Patch& patch, int cx, int cy) {
  const int r = patch.radius;
  long long ssd = 0;
  std::size_t k = 0;
  for (int y = cy - r; y <= cy + r; ++y) {
    const std::uint8_t* row = &img.data[static_cast<std::size_t>(y) * img.width];
    for (int x = cx - r; x <= cx + r; ++x) {
      const int d = static_cast<int>(row[x]) - static_cast<int>(patch.values[k++]);
      ssd += static_cast<long long>(d) * d;
    }
  }
  return ssd;
}

double parabola_offset(double s_minus, double s_zero, double s_plus) {
  const double denom = s_minus - 2.0 * s_zero + s_plus;
  if (denom <= 0) {
    return 0.0;
  }
  return std::clamp(0.5 * (s_minus - s_plus) / denom, -0.5, 0.5);
}

}  // namespace

void MotionFilterParams::validate() const {
  if (max_features < 1 || patch_radius < 1 || pyramid_levels < 1 || search_radius < 1 ||
      search_radius > 32 || !(displacement_threshold > 0.0) || !(min_tracked_fraction > 0.0) ||
      min_tracked_fraction > 1.0) {
    throw Error("motion filter parameters out of range");
  }
}

std::vector<Feature> detect_features(const GrayImage& img, const MotionFilterParams& params) {
  params.validate();
  const int margin = params.patch_radius;
  if (img.width <= 2 * margin || img.height <= 2 * margin) {
    throw ImageTooSmall("image smaller than 2*patch_radius in some dimension");
  }

  const GradientField grads = central_gradients(img);
  constexpr int kTensorWindow = 2;
  const int lo = std::max(margin, kTensorWindow + 1);

  // Candidates: 3x3 local maxima of the corner score.
  std::vector<float> score(img.pixel_count(), 0.f);
  for (int y = lo; y < img.height - lo; ++y) {
    for (int x = lo; x < img.width - lo; ++x) {
      score[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<float>(min_eig_score(grads, x, y));
    }
  }
  std::vector<Feature> candidates;
  for (int y = lo; y < img.height - lo; ++y) {
    for (int x = lo; x < img.width - lo; ++x) {
      const float s = score[static_cast<std::size_t>(y) * img.width + x];
      if (s < kMinCornerScore) {
        continue;
      }
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) {
            continue;
          }
          const float sn = score[static_cast<std::size_t>(y + dy) * img.width + (x + dx)];
          // Strictly greater than later-scanned neighbors breaks plateaus
          // deterministically toward the top-left pixel.
          if (sn > s || (sn == s && (dy < 0 || (dy == 0 && dx < 0)))) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) {
        continue;
      }
      // Sub-pixel position: score-weighted centroid over the tensor window.
      double weight_sum = 0, wx = 0, wy = 0;
      for (int dy = -kTensorWindow; dy <= kTensorWindow; ++dy) {
        for (int dx = -kTensorWindow; dx <= kTensorWindow; ++dx) {
          const double w = score[static_cast<std::size_t>(y + dy) * img.width + (x + dx)];
          weight_sum += w;
          wx += w * (x + dx);
          wy += w * (y + dy);
        }
      }
      Vec2 position(x, y);
      if (weight_sum > 0) {
        position = Vec2(wx / weight_sum, wy / weight_sum);
      }
      position.x() = std::clamp(position.x(), static_cast<double>(margin),
                                static_cast<double>(img.width - 1 - margin));
      position.y() = std::clamp(position.y(), static_cast<double>(margin),
                                static_cast<double>(img.height - 1 - margin));
      candidates.push_back({position, s});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Feature& a, const Feature& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    if (a.position.y() != b.position.y()) {
      return a.position.y() < b.position.y();
    }
    return a.position.x() < b.position.x();
  });

  const double min_spacing_sq =
      4.0 * static_cast<double>(params.patch_radius) * params.patch_radius;
  std::vector<Feature> features;
  for (const Feature& cand : candidates) {
    if (static_cast<int>(features.size()) >= params.max_features) {
      break;
    }
    bool too_close = false;
    for (const Feature& kept : features) {
      if ((kept.position - cand.position).squaredNorm() < min_spacing_sq) {
        too_close = true;
        break;
      }
    }
    if (!too_close) {
      features.push_back(cand);
    }
  }
  return features;
}

std::vector<TrackedFeature> track_features(const GrayImage& a, const GrayImage& b,
                                           const std::vector<Feature>& features,
                                           const MotionFilterParams& params) {
  if (a.width != b.width || a.height != b.height) {
    throw DimensionMismatch("track_features requires images of equal dimensions");
  }

  std::vector<GrayImage> pyr_a{a};
  std::vector<GrayImage> pyr_b{b};
  const int min_side = 2 * params.patch_radius + 2 * params.search_radius + 2;
  for (int level = 1; level < params.pyramid_levels; ++level) {
    const GrayImage& prev = pyr_a.back();
    if (prev.width / 2 < min_side || prev.height / 2 < min_side) {
      break;
    }
    pyr_a.push_back(downsample_half(pyr_a.back()));
    pyr_b.push_back(downsample_half(pyr_b.back()));
  }
  const int levels = static_cast<int>(pyr_a.size());

  std::vector<TrackedFeature> results;
  results.reserve(features.size());
  for (const Feature& feature : features) {
    TrackedFeature result;
    result.feature = feature;

    Vec2 disp = Vec2::Zero();
    bool alive = true;
    bool on_search_edge = false;
    long long best_ssd = 0;
    Patch patch;
    int patch_pixels = 1;

    for (int level = levels - 1; level >= 0 && alive; --level) {
      const double scale = static_cast<double>(1 << level);
      const GrayImage& la = pyr_a[level];
      const GrayImage& lb = pyr_b[level];
      const int px = static_cast<int>(std::lround(feature.position.x() / scale));
      const int py = static_cast<int>(std::lround(feature.position.y() / scale));
      if (!extract_patch(la, px, py, params.patch_radius, &patch)) {
        if (level == 0) {
          alive = false;
        }
        disp *= 2.0;
        continue;
      }
      patch_pixels = (2 * params.patch_radius + 1) * (2 * params.patch_radius + 1);

      const int cx = static_cast<int>(std::lround(disp.x()));
      const int cy = static_cast<int>(std::lround(disp.y()));
      const int r = params.search_radius;
      long long ssd_grid[2 * 32 + 1][2 * 32 + 1];  // search_radius capped below
      const int rr = std::min(r, 32);

      long long best = std::numeric_limits<long long>::max();
      int best_dx = 0, best_dy = 0;
      bool any = false;
      for (int dy = -rr; dy <= rr; ++dy) {
        for (int dx = -rr; dx <= rr; ++dx) {
          const int tx = px + cx + dx;
          const int ty = py + cy + dy;
          long long ssd = std::numeric_limits<long long>::max();
          if (tx - params.patch_radius >= 0 && ty - params.patch_radius >= 0 &&
              tx + params.patch_radius < lb.width && ty + params.patch_radius < lb.height) {
            ssd = patch_ssd(lb, patch, tx, ty);
            any = true;
          }
          ssd_grid[dy + rr][dx + rr] = ssd;
          if (ssd < best) {
            best = ssd;
            best_dx = dx;
            best_dy = dy;
          }
        }
      }
      if (!any) {
        alive = false;
        break;
      }

      double sub_x = 0, sub_y = 0;
      const bool edge_x = best_dx == -rr || best_dx == rr;
      const bool edge_y = best_dy == -rr || best_dy == rr;
      // A perfect match needs no sub-pixel correction; interpolating its
      // asymmetric neighbors would only inject a spurious shift.
      if (!edge_x && best > 0) {
        const long long sm = ssd_grid[best_dy + rr][best_dx - 1 + rr];
        const long long sp = ssd_grid[best_dy + rr][best_dx + 1 + rr];
        if (sm != std::numeric_limits<long long>::max() &&
            sp != std::numeric_limits<long long>::max()) {
          sub_x = parabola_offset(static_cast<double>(sm), static_cast<double>(best),
                                  static_cast<double>(sp));
        }
      }
      if (!edge_y && best > 0) {
        const long long sm = ssd_grid[best_dy - 1 + rr][best_dx + rr];
        const long long sp = ssd_grid[best_dy + 1 + rr][best_dx + rr];
        if (sm != std::numeric_limits<long long>::max() &&
            sp != std::numeric_limits<long long>::max()) {
          sub_y = parabola_offset(static_cast<double>(sm), static_cast<double>(best),
                                  static_cast<double>(sp));
        }
      }

      disp = Vec2(cx + best_dx + sub_x, cy + best_dy + sub_y);
      best_ssd = best;
      on_search_edge = edge_x || edge_y;
      if (level > 0) {
        disp *= 2.0;
      }
    }

    if (alive) {
      const auto [min_it, max_it] = std::minmax_element(patch.values.begin(), patch.values.end());
      const double dynamic_range = static_cast<double>(*max_it) - static_cast<double>(*min_it);
      const double rms = std::sqrt(static_cast<double>(best_ssd) / patch_pixels);
      result.tracked = !on_search_edge && rms <= kMaxResidualFraction * dynamic_range;
      result.displacement = disp;
    }
    results.push_back(result);
  }
  return results;
}

std::vector<int> filter_low_movement(const std::vector<GrayImage>& sequence,
                                     const MotionFilterParams& params) {
  std::vector<int> kept;
  if (sequence.empty()) {
    return kept;
  }
  kept.push_back(0);
  std::vector<Feature> ref_features = detect_features(sequence[0], params);

  const int n = static_cast<int>(sequence.size());
  for (int i = 1; i < n; ++i) {
    bool keep = false;
    if (ref_features.empty()) {
      // A featureless reference cannot register motion; treat the candidate
      // as a duplicate.
      keep = false;
    } else {
      const auto tracks = track_features(sequence[kept.back()], sequence[i], ref_features, params);
      std::vector<double> magnitudes;
      for (const TrackedFeature& t : tracks) {
        if (t.tracked) {
          magnitudes.push_back(t.displacement.norm());
        }
      }
      const double tracked_fraction =
          static_cast<double>(magnitudes.size()) / static_cast<double>(ref_features.size());
      if (tracked_fraction < params.min_tracked_fraction) {
        keep = true;  // untrackable: the view changed too much to compare
      } else {
        std::nth_element(magnitudes.begin(), magnitudes.begin() + magnitudes.size() / 2,
                         magnitudes.end());
        const double median = magnitudes[magnitudes.size() / 2];
        keep = median >= params.displacement_threshold;
      }
    }
    if (keep) {
      kept.push_back(i);
      ref_features = detect_features(sequence[i], params);
    }
  }
  if (kept.back() != n - 1) {
    kept.push_back(n - 1);
  }
  return kept;
}

}  // namespace changedet
