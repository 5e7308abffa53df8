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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "genn/raster.hpp"

namespace genn {

struct GlcmConfig {
  std::size_t levels = 8;
  int dx = 1;
  int dy = 0;
  bool symmetric = true;

  bool operator==(const GlcmConfig&) const = default;
};

/// Raster re-binned to `levels` gray levels: q = floor(v * levels / 256).
class LevelGrid {
 public:
  LevelGrid(std::size_t width, std::size_t height, std::size_t levels, std::vector<std::uint16_t> cells);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t levels() const noexcept { return levels_; }
  std::uint16_t at(std::size_t x, std::size_t y) const noexcept { return cells_[y * width_ + x]; }

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t levels_;
  std::vector<std::uint16_t> cells_;
};

LevelGrid quantize(const Raster& r, std::size_t levels);

/// Normalized gray-level co-occurrence matrix for one pixel offset.
class GlcmMatrix {
 public:
  /// Wraps an explicit probability table (row-major levels x levels). Entries
  /// must be non-negative and sum to 1 within 1e-9.
  static GlcmMatrix from_probabilities(std::size_t levels, std::vector<double> cells, int dx = 1, int dy = 0,
                                       bool symmetric = false);

  std::size_t levels() const noexcept { return levels_; }
  double at(std::size_t i, std::size_t j) const noexcept { return cells_[i * levels_ + j]; }
  const std::vector<double>& cells() const noexcept { return cells_; }
  int dx() const noexcept { return dx_; }
  int dy() const noexcept { return dy_; }
  bool symmetric() const noexcept { return symmetric_; }

 private:
  GlcmMatrix(std::size_t levels, std::vector<double> cells, int dx, int dy, bool symmetric)
      : levels_(levels), cells_(std::move(cells)), dx_(dx), dy_(dy), symmetric_(symmetric) {}

  friend GlcmMatrix compute_glcm(const LevelGrid&, const Window&, const GlcmConfig&);

  std::size_t levels_;
  std::vector<double> cells_;
  int dx_;
  int dy_;
  bool symmetric_;
};

/// Counts (q(p), q(p + offset)) for every pixel pair with both ends inside
/// the window, in both orders when symmetric, then normalizes. The window may
/// have any side here; it must contain at least one pair.
GlcmMatrix compute_glcm(const LevelGrid& grid, const Window& w, const GlcmConfig& cfg);
GlcmMatrix compute_glcm(const Raster& r, const Window& w, const GlcmConfig& cfg);

/// The thirteen texture statistics of a GLCM, in the order they are packed
/// into feature vectors. Entropies are in bits.
struct HaralickVector {
  static constexpr std::size_t kCount = 13;

  double energy = 0;                     // sum p^2
  double correlation = 0;                // (sum ij p - mx my) / (sx sy), 0 if sx or sy is 0
  double inertia = 0;                    // sum (i-j)^2 p
  double entropy = 0;                    // -sum p log p
  double inverse_difference_moment = 0;  // sum p / (1 + (i-j)^2)
  double sum_average = 0;                // sum k p_{x+y}(k)
  double sum_variance = 0;               // sum (k - sum_average)^2 p_{x+y}(k)
  double sum_entropy = 0;                // -sum p_{x+y} log p_{x+y}
  double difference_average = 0;         // sum k p_{x-y}(k)
  double difference_variance = 0;        // sum (k - difference_average)^2 p_{x-y}(k)
  double difference_entropy = 0;         // -sum p_{x-y} log p_{x-y}
  double imc1 = 0;                       // (HXY - HXY1) / max(HX, HY), 0 if max is 0
  double imc2 = 0;                       // sqrt(1 - exp(-2 (HXY2 - HXY))), entropies in nats

  std::array<double, kCount> to_array() const noexcept;
  static const std::array<const char*, kCount>& names() noexcept;
};

HaralickVector haralick_features(const GlcmMatrix& g);

}  // namespace genn
