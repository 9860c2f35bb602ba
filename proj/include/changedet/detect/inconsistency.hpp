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

#include <vector>

#include "changedet/detect/reproject.hpp"
#include "changedet/image.hpp"
#include "changedet/regions.hpp"
#include "changedet/types.hpp"

namespace changedet {

/// Pixel-position uncertainty of a re-projected point, plus the chi-square
/// gate bounding the search region. tau2 = 11.82 is the chi-square(2 dof)
/// critical value matching a 3-sigma normal bound.
class UncertaintyModel {
 public:
  UncertaintyModel();  // isotropic sigma = 2 px
  UncertaintyModel(const Mat2& pixel_covariance, double tau2);

  static UncertaintyModel isotropic(double sigma_px, double tau2 = 11.82);

  const Mat2& pixel_covariance() const { return covariance_; }
  double tau2() const { return tau2_; }

  /// Integer offsets z-x with (z-x)' Sigma^-1 (z-x) < tau2. Never empty: the
  /// zero offset always gates in.
  std::vector<Eigen::Vector2i> gate_offsets() const;

  /// Squared Mahalanobis distance of `delta` under the pixel covariance.
  double mahalanobis_sq(const Vec2& delta) const;

 private:
  Mat2 covariance_;
  Mat2 information_;
  double tau2_;
};

struct InconsistencyParams {
  double intensity_threshold = 30.0;  // 8-bit units
  int kernel_radius = 2;              // px, square opening kernel
  double min_region_area = 150.0;     // px^2
  int max_comparisons = 4;            // m, neighbors compared per image
  int min_confirming_pairs = 2;

  /// Throws Error unless every field is positive.
  void validate() const;
};

/// Per-pixel minimum absolute intensity difference between `dst` and any
/// valid warped pixel inside the Mahalanobis gate. Invalid pixels carry 0.
FloatImage inconsistency_distance(const GrayImage& dst, const WarpedImage& warped,
                                  const UncertaintyModel& uncertainty, int threads = 0);

/// Threshold, open (erode+dilate), label 8-connected components, and keep
/// components of at least min_region_area pixels. Region moments are the
/// population mean/covariance of member pixel coordinates.
std::vector<ChangeRegion2D> extract_regions(const FloatImage& distance,
                                            const InconsistencyParams& params);

}  // namespace changedet
