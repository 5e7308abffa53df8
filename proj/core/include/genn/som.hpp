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
#include <span>
#include <vector>

namespace genn {

struct SomConfig;

/// Rectangular Kohonen map. Unit (row, col) has index row * cols + col.
class SomGrid {
 public:
  SomGrid(std::size_t rows, std::size_t cols, std::size_t dim);
  SomGrid(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> codebook, bool trained);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t units() const noexcept { return rows_ * cols_; }
  bool trained() const noexcept { return trained_; }

  std::span<const double> unit(std::size_t index) const noexcept { return {codebook_.data() + index * dim_, dim_}; }
  std::span<double> unit(std::size_t index) noexcept { return {codebook_.data() + index * dim_, dim_}; }
  const std::vector<double>& codebook() const noexcept { return codebook_; }

  bool operator==(const SomGrid&) const = default;

 private:
  friend SomGrid train_som(const std::vector<std::vector<double>>&, std::size_t, std::size_t,
                           const SomConfig&);
  std::size_t rows_;
  std::size_t cols_;
  std::size_t dim_;
  std::vector<double> codebook_;
  bool trained_ = false;
};

struct SomConfig {
  std::size_t epochs = 20;
  double lr0 = 0.5;
  double radius0 = 1.0;
  std::uint64_t seed = 1;

  bool operator==(const SomConfig&) const = default;
};

struct BestMatch {
  std::size_t row = 0;
  std::size_t col = 0;
  double distance = 0.0;

  std::size_t index(std::size_t cols) const noexcept { return row * cols + col; }
};

/// Codebook starts as Rng(seed) uniform noise inside each dimension's sample
/// range. Epoch e (0-based, of E) uses
///   lr(e) = lr0 * 0.01^(e / (E - 1)),  r(e) = radius0 * (0.5 / radius0)^(e / (E - 1))
/// (a single epoch uses lr0 and radius0), floored at lr0 * 0.01 and 0.5. Every
/// epoch visits the samples in a fresh Rng shuffle; each visit moves every
/// unit toward the sample by lr * exp(-d^2 / (2 r^2)), d being the grid
/// distance to the best-matching unit.
SomGrid train_som(const std::vector<std::vector<double>>& samples, std::size_t rows, std::size_t cols,
                  const SomConfig& cfg);

/// Nearest unit by Euclidean distance; ties go to the lowest row-major index.
BestMatch best_matching_unit(const SomGrid& g, std::span<const double> v);

}  // namespace genn
