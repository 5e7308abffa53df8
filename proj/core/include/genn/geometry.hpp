// Copyright 2026 The genn Authors.
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

#include <cstddef>
#include <span>
#include <vector>

#include "genn/raster.hpp"

namespace genn {

struct Pixel {
  int x = 0;
  int y = 0;

  bool operator==(const Pixel&) const = default;
  auto operator<=>(const Pixel&) const = default;
};

struct BoundingBox {
  int x0 = 0;  // inclusive
  int y0 = 0;
  int x1 = 0;  // inclusive
  int y1 = 0;

  bool operator==(const BoundingBox&) const = default;
};

/// A connected foreground region and its shape attributes.
struct ObjectRecord {
  std::size_t id = 0;
  std::vector<Pixel> pixels;  // row-major order
  BoundingBox bbox;
  std::size_t area = 0;
  /// Foreground pixels with a 4-neighbor on background (or off-image).
  std::size_t perimeter = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  /// sqrt(major / minor) eigenvalue ratio of the pixel covariance, each pixel
  /// counted as a unit square (adds 1/12 to both variances), so always >= 1.
  double elongation = 1.0;
  std::size_t skeleton_length = 0;
  /// Ribbon width estimate area / skeleton_length.
  double width = 0.0;
  /// min(1, 4 pi area / perimeter^2).
  double compactness = 0.0;
  /// Mean source gray value; filled by fill_mean_intensity().
  double mean_intensity = 0.0;
};

/// Components labeled in scan order (the first foreground pixel in row-major
/// order starts component 0). `connectivity` is 4 or 8.
std::vector<ObjectRecord> connected_components(const Mask& m, int connectivity = 8);

/// Per-pixel component index, -1 on background. Same numbering as
/// connected_components().
std::vector<int> label_components(const Mask& m, int connectivity, std::size_t* count = nullptr);

void fill_mean_intensity(std::vector<ObjectRecord>& objects, const Raster& source);

/// Two-subiteration 3x3 thinning. Neighbors are numbered clockwise from
/// north: P2 = N, P3 = NE, P4 = E, P5 = SE, P6 = S, P7 = SW, P8 = W, P9 = NW;
/// B = number of set neighbors, A = number of 0 -> 1 transitions in the cyclic
/// sequence P2..P9. A pixel is a candidate when 2 <= B <= 6, A == 1 and
///   pass 1: P2*P4*P6 == 0 and P4*P6*P8 == 0
///   pass 2: P2*P4*P8 == 0 and P2*P6*P8 == 0.
/// Candidates are flagged on a snapshot, then deleted in row-major order, each
/// only if it still qualifies against the partially thinned image. Passes
/// alternate until a full round deletes nothing.
Mask skeleton(const Mask& m);

/// Pixels with exactly one 8-neighbor in the skeleton, row-major order.
std::vector<Pixel> endpoints(const Mask& skel);

struct PointD {
  double x = 0.0;
  double y = 0.0;
};

enum class CurveAxis { x_param, y_param };

/// other = c0 + c1 * t + c2 * t^2 + ..., where t is x (x_param) or y.
struct CurveModel {
  int degree = 1;
  std::vector<double> coefficients;
  CurveAxis axis = CurveAxis::x_param;
  double rms_residual = 0.0;

  double evaluate(double t) const noexcept;
};

/// Least squares through the normal equations, solved with partial pivoting
/// in a centered and scaled parameter. `degree` is 1..3 and at least
/// degree + 1 points are required. Throws PreconditionError when
/// underdetermined or singular.
CurveModel fit_curve(std::span<const PointD> points, int degree, CurveAxis axis);

/// Fits both parameterizations and keeps the one with the smaller residual
/// (x wins ties). Either one may be singular, not both.
CurveModel fit_curve(std::span<const PointD> points, int degree);

struct BridgeParams {
  double max_gap = 12.0;
  int degree = 2;
  std::size_t context_len = 10;

  bool operator==(const BridgeParams&) const = default;
};

/// Joins breaks between components. Endpoint pairs of the skeleton lying in
/// different components and at most max_gap apart are taken in ascending
/// distance order; each endpoint joins at most one bridge and two components
/// are bridged once (bridged components count as one afterwards). A bridge
/// follows the curve fitted through the context_len skeleton pixels behind
/// both endpoints, blended so it starts and ends exactly on them, and is
/// widened to the mean ribbon width of the two components. Only adds pixels.
Mask bridge_gaps(const Mask& m, const BridgeParams& params);

/// Bresenham segment, both ends included.
std::vector<Pixel> line_pixels(Pixel a, Pixel b);

}  // namespace genn
