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
#include <cstdint>
#include <vector>

#include "genn/raster.hpp"

namespace genn {

/// Binary morphology footprint: odd side, center bit always set.
class StructuringElement {
 public:
  StructuringElement(std::size_t side, std::vector<std::uint8_t> bits);

  /// side x side, all bits set.
  static StructuringElement square(std::size_t side);

  std::size_t side() const noexcept { return side_; }
  bool test(std::size_t x, std::size_t y) const noexcept { return bits_[y * side_ + x] != 0; }

 private:
  std::size_t side_;
  std::vector<std::uint8_t> bits_;
};

struct CannyParams {
  double sigma = 1.0;
  double low_thr = 20.0;
  double high_thr = 60.0;

  bool operator==(const CannyParams&) const = default;
};

/// Gaussian smoothing (radius ceil(3 sigma), replicate border), Sobel
/// gradients, non-maximum suppression over four direction bins and
/// 8-connected hysteresis. The raster must be at least 3x3.
Mask canny(const Raster& r, const CannyParams& p);

/// Smoothed Sobel gradient magnitude, as used internally by canny().
std::vector<double> gradient_magnitude(const Raster& r, double sigma);

/// Pixel set iff the footprint centered there lies entirely on foreground.
/// Out-of-bounds pixels count as background.
Mask erode(const Mask& m, const StructuringElement& se);

/// Minkowski dilation: pixel p set iff some footprint offset b has p - b on
/// foreground. Identical to "footprint covers foreground" for symmetric
/// elements.
Mask dilate(const Mask& m, const StructuringElement& se);

/// dilate(erode(m)).
Mask open(const Mask& m, const StructuringElement& se);

}  // namespace genn
