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

#include <algorithm>
#include <cmath>
#include <random>

#include "changedet/errors.hpp"
#include "changedet/motion/motion_filter.hpp"

using namespace changedet;

namespace {

GrayImage checkerboard(int width, int height, int cell) {
  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y) = ((x / cell + y / cell) % 2) ? 255 : 0;
    }
  }
  return img;
}

// Textured but aperiodic pattern, safe for unambiguous tracking.
GrayImage noise_pattern(int width, int height, std::uint64_t seed) {
  GrayImage img(width, height);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> value(0, 255);
  for (auto& px : img.data) {
    px = static_cast<std::uint8_t>(value(rng));
  }
  // Smooth once so gradients are not pure salt-and-pepper.
  GrayImage out(width, height);
  for (int y = 1; y < height - 1; ++y) {
    for (int x = 1; x < width - 1; ++x) {
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          sum += img.at(x + dx, y + dy);
        }
      }
      out.at(x, y) = static_cast<std::uint8_t>(sum / 9);
    }
  }
  return out;
}

GrayImage shift_image(const GrayImage& img, int dx, int dy) {
  GrayImage out(img.width, img.height, 0);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int sx = x - dx;
      const int sy = y - dy;
      if (sx >= 0 && sx < img.width && sy >= 0 && sy < img.height) {
        out.at(x, y) = img.at(sx, sy);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("detect_features: constant image yields nothing") {
  const GrayImage flat(128, 96, 77);
  CHECK(detect_features(flat, {}).empty());
}

TEST_CASE("detect_features: image smaller than a patch is rejected") {
  const GrayImage tiny(10, 10, 0);
  CHECK_THROWS_AS(detect_features(tiny, {}), ImageTooSmall);
}

TEST_CASE("detect_features: single white pixel attracts exactly one nearby corner") {
  GrayImage img(100, 100, 0);
  img.at(50, 50) = 255;
  const auto features = detect_features(img, {});
  REQUIRE_FALSE(features.empty());
  for (const Feature& f : features) {
    CHECK((f.position - Vec2(50, 50)).norm() <= 2.0);
  }
  // Non-maximum suppression collapses the response cluster to one feature.
  CHECK(features.size() == 1);
}

TEST_CASE("detect_features: checkerboard corners sit on grid intersections") {
  const int cell = 20;
  const GrayImage board = checkerboard(200, 160, cell);
  MotionFilterParams params;
  params.max_features = 500;
  const auto features = detect_features(board, params);
  CHECK(features.size() >= 20);
  for (const Feature& f : features) {
    // Intersections lie at (k*cell - 0.5, j*cell - 0.5) between the tiles.
    const double gx = std::round((f.position.x() + 0.5) / cell) * cell - 0.5;
    const double gy = std::round((f.position.y() + 0.5) / cell) * cell - 0.5;
    CHECK((f.position - Vec2(gx, gy)).norm() <= 1.0);
  }
  // Scores are sorted descending.
  for (std::size_t i = 1; i < features.size(); ++i) {
    CHECK(features[i - 1].score >= features[i].score);
  }
}

TEST_CASE("track_features: identical images give zero displacement") {
  const GrayImage img = noise_pattern(160, 120, 3);
  const auto features = detect_features(img, {});
  REQUIRE_FALSE(features.empty());
  const auto tracks = track_features(img, img, features, {});
  for (const TrackedFeature& t : tracks) {
    CHECK(t.tracked);
    CHECK(t.displacement.norm() < 1e-12);
  }
}

TEST_CASE("track_features: integer shift is recovered within half a pixel") {
  const GrayImage a = noise_pattern(200, 150, 4);
  const GrayImage b = shift_image(a, 3, 0);
  MotionFilterParams params;
  const auto features = detect_features(a, params);
  REQUIRE(features.size() >= 10);
  const auto tracks = track_features(a, b, features, params);

  int tracked_interior = 0;
  for (const TrackedFeature& t : tracks) {
    const auto& p = t.feature.position;
    // Stay clear of the wrap-free border.
    if (p.x() < 20 || p.x() > 175 || p.y() < 20 || p.y() > 130 || !t.tracked) {
      continue;
    }
    ++tracked_interior;
    CHECK((t.displacement - Vec2(3, 0)).norm() <= 0.5);
  }
  CHECK(tracked_interior >= 5);
}

TEST_CASE("track_features: inverted target kills the tracked fraction") {
  // Aperiodic texture: inverting it is not equivalent to any translation.
  const GrayImage a = noise_pattern(160, 120, 6);
  GrayImage b = a;
  for (auto& px : b.data) {
    px = static_cast<std::uint8_t>(255 - px);
  }
  MotionFilterParams params;
  const auto features = detect_features(a, params);
  REQUIRE_FALSE(features.empty());
  const auto tracks = track_features(a, b, features, params);
  int tracked = 0;
  for (const TrackedFeature& t : tracks) {
    tracked += t.tracked ? 1 : 0;
  }
  CHECK(static_cast<double>(tracked) / features.size() < params.min_tracked_fraction);
}

TEST_CASE("track_features: dimension mismatch is rejected") {
  const GrayImage a(64, 64, 0);
  const GrayImage b(64, 32, 0);
  CHECK_THROWS_AS(track_features(a, b, {}, {}), DimensionMismatch);
}

TEST_CASE("filter_low_movement: empty and duplicate sequences") {
  CHECK(filter_low_movement({}, {}).empty());

  const GrayImage frame = noise_pattern(160, 120, 9);
  std::vector<GrayImage> dupes(50, frame);
  const auto kept = filter_low_movement(dupes, {});
  CHECK(kept == std::vector<int>{0, 49});
}

TEST_CASE("filter_low_movement: single frame keeps index 0") {
  const std::vector<GrayImage> single{noise_pattern(160, 120, 10)};
  CHECK(filter_low_movement(single, {}) == std::vector<int>{0});
}

TEST_CASE("filter_low_movement: drifting sequence properties") {
  // 1.5 px drift per frame; duplicates interleaved.
  const GrayImage base = noise_pattern(260, 200, 11);
  std::vector<GrayImage> sequence;
  for (int i = 0; i < 16; ++i) {
    sequence.push_back(shift_image(base, (i * 3) / 2, 0));
  }

  MotionFilterParams params;
  const auto kept = filter_low_movement(sequence, params);

  // Order preservation: strictly increasing indices.
  for (std::size_t i = 1; i < kept.size(); ++i) {
    CHECK(kept[i] > kept[i - 1]);
  }

  // Idempotence: filtering the kept subsequence changes nothing.
  std::vector<GrayImage> kept_frames;
  for (int index : kept) {
    kept_frames.push_back(sequence[index]);
  }
  const auto kept_again = filter_low_movement(kept_frames, params);
  std::vector<int> identity(kept.size());
  for (std::size_t i = 0; i < identity.size(); ++i) {
    identity[i] = static_cast<int>(i);
  }
  CHECK(kept_again == identity);

  // Monotonicity: raising the threshold never keeps more frames.
  std::size_t previous = kept.size();
  for (double threshold : {3.0, 4.5, 6.0, 9.0}) {
    MotionFilterParams stricter = params;
    stricter.displacement_threshold = threshold;
    const auto kept_strict = filter_low_movement(sequence, stricter);
    CHECK(kept_strict.size() <= previous);
    previous = kept_strict.size();
  }
}

TEST_CASE("filter_low_movement: near-duplicates collapse, distinct frames survive") {
  // 12 frames: 9 jittering near-duplicates followed by 3 distinct shifts.
  const GrayImage base = noise_pattern(260, 200, 13);
  std::vector<GrayImage> sequence;
  for (int i = 0; i < 9; ++i) {
    sequence.push_back(shift_image(base, i % 2, 0));  // sub-threshold jitter
  }
  sequence.push_back(shift_image(base, 8, 0));
  sequence.push_back(shift_image(base, 16, 0));
  sequence.push_back(shift_image(base, 24, 4));

  const auto kept = filter_low_movement(sequence, {});
  CHECK(kept.size() <= 5);
  CHECK(std::find(kept.begin(), kept.end(), 9) != kept.end());
  CHECK(std::find(kept.begin(), kept.end(), 10) != kept.end());
  CHECK(std::find(kept.begin(), kept.end(), 11) != kept.end());
}
