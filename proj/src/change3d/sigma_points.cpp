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

#include "changedet/change3d/sigma_points.hpp"

#include <cmath>

#include "changedet/errors.hpp"

namespace changedet {

namespace {

// Analytic 2x2 Cholesky-style factor F with F F' = cov, tolerant of
// rank-deficient PSD inputs. Column signs are fixed (non-negative diagonal),
// which makes cross-view sigma-point pairing by index deterministic.
Mat2 psd_sqrt_factor(const Mat2& cov) {
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  if (std::abs(cov(0, 1) - cov(1, 0)) > 1e-9 * scale) {
    throw NonPsdCovariance("covariance must be symmetric");
  }
  if (cov(0, 0) < -tol || cov(1, 1) < -tol) {
    throw NonPsdCovariance("covariance has a negative diagonal entry");
  }

  Mat2 f = Mat2::Zero();
  if (cov(0, 0) > tol) {
    f(0, 0) = std::sqrt(cov(0, 0));
    f(1, 0) = cov(1, 0) / f(0, 0);
    const double rem = cov(1, 1) - f(1, 0) * f(1, 0);
    if (rem < -tol) {
      throw NonPsdCovariance("covariance has a negative eigenvalue");
    }
    f(1, 1) = std::sqrt(std::max(0.0, rem));
  } else {
    // First column is numerically zero; PSD then demands zero off-diagonals.
    if (std::abs(cov(1, 0)) > std::sqrt(tol * std::max(tol, cov(1, 1)))) {
      throw NonPsdCovariance("covariance has a negative eigenvalue");
    }
    f(1, 1) = std::sqrt(std::max(0.0, cov(1, 1)));
  }
  return f;
}

}  // namespace

SigmaPoints2 sigma_points(const Vec2& mean, const Mat2& covariance) {
  const Mat2 factor = psd_sqrt_factor(covariance);
  const double spread = std::sqrt(2.0);
  SigmaPoints2 result;
  result.points[0] = mean;
  result.points[1] = mean + spread * factor.col(0);
  result.points[2] = mean - spread * factor.col(0);
  result.points[3] = mean + spread * factor.col(1);
  result.points[4] = mean - spread * factor.col(1);
  return result;
}

}  // namespace changedet
