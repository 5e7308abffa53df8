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
#include <filesystem>
#include <vector>

namespace genn {

/// Single-band 8-bit image, row-major.
class Raster {
 public:
  Raster() = default;
  /// Zero-filled raster. Both dimensions must be >= 1.
  Raster(std::size_t width, std::size_t height);
  /// Takes ownership of `values`; its length must equal width * height.
  Raster(std::size_t width, std::size_t height, std::vector<std::uint8_t> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y) const noexcept { return values_[y * width_ + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) noexcept { return values_[y * width_ + x]; }

  const std::vector<std::uint8_t>& values() const noexcept { return values_; }
  std::vector<std::uint8_t>& values() noexcept { return values_; }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> values_;
};

/// Binary image; bits are 0 (background) or 1 (foreground).
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t width, std::size_t height);
  /// Any nonzero entry of `bits` is normalized to 1.
  Mask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool test(std::size_t x, std::size_t y) const noexcept { return bits_[y * width_ + x] != 0; }
  void set(std::size_t x, std::size_t y, bool on = true) noexcept { bits_[y * width_ + x] = on ? 1 : 0; }

  /// Out-of-bounds reads as background.
  bool test_signed(long x, long y) const noexcept {
    if (x < 0 || y < 0 || x >= static_cast<long>(width_) || y >= static_cast<long>(height_)) return false;
    return test(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
  }

  std::size_t count() const noexcept;
  bool same_shape(const Mask& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  /// True when every foreground pixel of *this is foreground in `other`.
  bool subset_of(const Mask& other) const;

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  /// 0 -> 0, 1 -> 255.
  Raster to_raster() const;
  /// Nonzero gray -> foreground.
  static Mask from_raster(const Raster& r);

  bool operator==(const Mask&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Square window with an odd side, anchored at its top-left pixel.
struct Window {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t size = 1;

  /// Window of side `size` centered on (cx, cy), shifted inward so that it
  /// stays inside a width x height image.
  static Window centered_clamped(std::size_t cx, std::size_t cy, std::size_t size, std::size_t width,
                                 std::size_t height);

  bool fits(std::size_t width, std::size_t height) const noexcept {
    return size >= 1 && x0 + size <= width && y0 + size <= height;
  }
};

/// Reads a P2 (ASCII) or P5 (binary) PGM with maxval <= 255.
Raster load_raster(const std::filesystem::path& path);

/// Writes canonical binary P5 with maxval 255.
void save_raster(const Raster& r, const std::filesystem::path& path);

/// Masks are stored as PGM with foreground 255.
Mask load_mask(const std::filesystem::path& path);
void save_mask(const Mask& m, const std::filesystem::path& path);

/// Linear contrast stretch. The gray level at the `low_pct` quantile maps to
/// 0, the one at `high_pct` to 255, with clamping outside. Quantiles use the
/// nearest-rank rule on the sorted pixel values: rank = ceil(p * n), clamped
/// to [1, n]. When both quantiles coincide (constant raster) the input is
/// returned unchanged.
Raster histogram_stretch(const Raster& r, double low_pct, double high_pct);

/// Row-major window pixels scaled to [0, 1]. `w.size` must be odd.
std::vector<double> flatten_window(const Raster& r, const Window& w);

}  // namespace genn
