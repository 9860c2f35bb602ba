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

#include "changedet/change3d/triangulate.hpp"

#include <cmath>

#include "changedet/errors.hpp"

namespace changedet {

TriangulationProblem::TriangulationProblem(const std::vector<PixelObservation>& observations) {
  design.resize(3 * static_cast<Eigen::Index>(observations.size()), 4);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    design.middleRows<3>(3 * static_cast<Eigen::Index>(i)) =
        skew(observations[i].pixel_h) * observations[i].projection.matrix();
  }
}

TriangulationResult triangulate(const std::vector<PixelObservation>& observations) {
  if (observations.size() < 2) {
    throw DegenerateGeometry("triangulation needs at least 2 observations");
  }
  const TriangulationProblem problem(observations);

  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 4>> svd(problem.design,
                                                                 Eigen::ComputeFullV);
  const Eigen::VectorXd singular = svd.singularValues();
  const double largest = singular(0);
  const double second_smallest = singular(2);
  const double smallest = singular(3);
  if (!(largest > 0.0) || (second_smallest - smallest) < 1e-9 * largest) {
    throw DegenerateGeometry("depth unresolvable: near-equal smallest singular values");
  }

  Vec4 solution = svd.matrixV().col(3);
  if (std::abs(solution(3)) < 1e-15 * solution.norm()) {
    throw DegenerateGeometry("triangulated point at infinity");
  }

  // Refinement: the raw algebraic residual weights rows by pixel magnitude
  // and view depth, which skews inconsistent observations toward far
  // solutions. The pixel-centered two-row form (P1 - u*P3, P2 - v*P3) gives
  // depth-weighted reprojection residuals; iterating with inverse-depth row
  // scaling converges to the geometric least squares. Exact observations are
  // fixed points, so exact recovery is untouched.
  Eigen::Matrix<double, Eigen::Dynamic, 4> centered(2 * observations.size(), 4);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const Vec3& h = observations[i].pixel_h;
    const Mat34& p = observations[i].projection.matrix();
    const double w = std::abs(h.z()) > 1e-15 * h.norm() ? h.z() : 1.0;
    centered.row(2 * i) = p.row(0) - (h.x() / w) * p.row(2);
    centered.row(2 * i + 1) = p.row(1) - (h.y() / w) * p.row(2);
  }
  for (int iteration = 0; iteration < 3; ++iteration) {
    Eigen::Matrix<double, Eigen::Dynamic, 4> reweighted = centered;
    bool valid = true;
    for (std::size_t i = 0; i < observations.size(); ++i) {
      const double depth = (observations[i].projection.matrix() * solution)(2) / solution(3);
      if (!(depth > 1e-12)) {
        valid = false;
        break;
      }
      reweighted.middleRows<2>(2 * static_cast<Eigen::Index>(i)) /= depth;
    }
    if (!valid) {
      break;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 4>> refit(reweighted,
                                                                     Eigen::ComputeFullV);
    const Vec4 refined = refit.matrixV().col(3);
    if (std::abs(refined(3)) < 1e-15 * refined.norm()) {
      break;
    }
    solution = refined;
  }

  TriangulationResult result;
  result.point = solution.head<3>() / solution(3);
  result.residual = smallest;

  for (const PixelObservation& obs : observations) {
    const double depth = (obs.projection.matrix() * result.point.homogeneous())(2);
    if (!(depth > 0.0)) {
      throw BehindCamera("triangulated point behind a supporting camera");
    }
  }
  return result;
}

}  // namespace changedet
