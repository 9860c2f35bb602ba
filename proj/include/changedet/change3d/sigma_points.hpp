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

#pragma once

#include <array>

#include "changedet/types.hpp"

namespace changedet {

/// Minimal 2D unscented set: the mean plus mean +/- sqrt(2) times each column
/// of the covariance square root (kappa = 0). The center carries weight 0 and
/// each outer point weight 1/4, so the weighted moments reproduce the input
/// mean and covariance exactly.
struct SigmaPoints2 {
  std::array<Vec2, 5> points;

  static constexpr double center_weight() { return 0.0; }
  static constexpr double outer_weight() { return 0.25; }
};

/// Throws NonPsdCovariance when `covariance` has a meaningfully negative
/// eigenvalue; rank-deficient PSD inputs are fine (degenerate axes collapse
/// onto the mean).
SigmaPoints2 sigma_points(const Vec2& mean, const Mat2& covariance);

}  // namespace changedet
