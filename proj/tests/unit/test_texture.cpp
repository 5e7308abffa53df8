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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "genn/error.hpp"
#include "genn/texture.hpp"
#include "support/support.hpp"

namespace genn {
namespace {

constexpr double kTol = 1e-9;

LevelGrid grid(std::size_t w, std::size_t h, std::size_t levels, std::vector<std::uint16_t> cells) {
  return LevelGrid(w, h, levels, std::move(cells));
}

LevelGrid checkerboard(std::size_t n) {
  std::vector<std::uint16_t> c(n * n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) c[y * n + x] = static_cast<std::uint16_t>((x + y) % 2);
  }
  return grid(n, n, 2, std::move(c));
}

TEST(Quantize, MapsGrayRangeOntoLevels) {
  const LevelGrid g = quantize(Raster(4, 1, {0, 31, 32, 255}), 8);
  EXPECT_EQ(g.at(0, 0), 0);
  EXPECT_EQ(g.at(1, 0), 0);
  EXPECT_EQ(g.at(2, 0), 1);
  EXPECT_EQ(g.at(3, 0), 7);
}

TEST(Glcm, TwoRowsOfPairs) {
  const auto g = compute_glcm(grid(2, 2, 2, {0, 0, 1, 1}), Window{0, 0, 2}, {2, 1, 0, true});
  EXPECT_NEAR(g.at(0, 0), 0.5, kTol);
  EXPECT_NEAR(g.at(1, 1), 0.5, kTol);
  EXPECT_EQ(g.at(0, 1), 0.0);
  EXPECT_EQ(g.at(1, 0), 0.0);
}

TEST(Glcm, ConstantWindowConcentratesOnOneCell) {
  for (auto [dx, dy] : {std::pair{1, 0}, {0, 1}, {1, 1}, {-1, 2}}) {
    const auto g = compute_glcm(grid(5, 5, 2, std::vector<std::uint16_t>(25, 0)), Window{0, 0, 5}, {2, dx, dy, true});
    EXPECT_EQ(g.at(0, 0), 1.0);
    EXPECT_EQ(g.at(0, 1) + g.at(1, 0) + g.at(1, 1), 0.0);
  }
}

TEST(Glcm, CheckerboardPairsAreAllMixed) {
  const auto g = compute_glcm(checkerboard(6), Window{0, 0, 5}, {2, 1, 0, true});
  EXPECT_NEAR(g.at(0, 1), 0.5, kTol);
  EXPECT_NEAR(g.at(1, 0), 0.5, kTol);
  EXPECT_EQ(g.at(0, 0), 0.0);
  EXPECT_EQ(g.at(1, 1), 0.0);
}

TEST(Glcm, RejectsZeroOffsetAndPairlessWindow) {
  const LevelGrid g = grid(3, 3, 2, std::vector<std::uint16_t>(9, 0));
  EXPECT_THROW(compute_glcm(g, Window{0, 0, 3}, {2, 0, 0, true}), PreconditionError);
  EXPECT_THROW(compute_glcm(g, Window{0, 0, 3}, {2, 3, 0, true}), PreconditionError);
}

TEST(GlcmProperty, NormalizedAndSymmetric) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t levels = 2 + rng.below(15);
    const Raster r = testing::random_raster(rng, 12, 12);
    const std::size_t size = 3 + 2 * rng.below(5);
    const Window w = Window::centered_clamped(rng.below(12), rng.below(12), size, 12, 12);
    GlcmConfig cfg{levels, static_cast<int>(rng.below(5)) - 2, static_cast<int>(rng.below(3)), true};
    if (cfg.dx == 0 && cfg.dy == 0) cfg.dx = 1;
    const auto g = compute_glcm(r, w, cfg);
    const double sum = std::accumulate(g.cells().begin(), g.cells().end(), 0.0);
    EXPECT_NEAR(sum, 1.0, kTol);
    for (std::size_t i = 0; i < levels; ++i) {
      for (std::size_t j = 0; j < levels; ++j) EXPECT_EQ(g.at(i, j), g.at(j, i));
    }
  }
}

TEST(Haralick, SingleLevelWindow) {
  const auto f = haralick_features(GlcmMatrix::from_probabilities(2, {1, 0, 0, 0}));
  EXPECT_NEAR(f.energy, 1.0, kTol);
  EXPECT_NEAR(f.entropy, 0.0, kTol);
  EXPECT_NEAR(f.inertia, 0.0, kTol);
  EXPECT_NEAR(f.inverse_difference_moment, 1.0, kTol);
  EXPECT_NEAR(f.sum_average, 0.0, kTol);
  EXPECT_NEAR(f.sum_variance, 0.0, kTol);
  EXPECT_NEAR(f.sum_entropy, 0.0, kTol);
  EXPECT_NEAR(f.difference_average, 0.0, kTol);
  EXPECT_NEAR(f.difference_variance, 0.0, kTol);
  EXPECT_NEAR(f.difference_entropy, 0.0, kTol);
  EXPECT_NEAR(f.correlation, 0.0, kTol);
  EXPECT_NEAR(f.imc1, 0.0, kTol);
  EXPECT_NEAR(f.imc2, 0.0, kTol);
}

TEST(Haralick, Checkerboard) {
  const auto f = haralick_features(GlcmMatrix::from_probabilities(2, {0, 0.5, 0.5, 0}));
  EXPECT_NEAR(f.energy, 0.5, kTol);
  EXPECT_NEAR(f.inertia, 1.0, kTol);
  EXPECT_NEAR(f.entropy, 1.0, kTol);
  EXPECT_NEAR(f.inverse_difference_moment, 0.5, kTol);
  EXPECT_NEAR(f.correlation, -1.0, kTol);
}

TEST(Haralick, UniformTwoLevel) {
  const auto f = haralick_features(GlcmMatrix::from_probabilities(2, {0.25, 0.25, 0.25, 0.25}));
  EXPECT_NEAR(f.energy, 0.25, kTol);
  EXPECT_NEAR(f.entropy, 2.0, kTol);
  EXPECT_NEAR(f.correlation, 0.0, kTol);
}

TEST(Haralick, FromProbabilitiesValidates) {
  EXPECT_THROW(GlcmMatrix::from_probabilities(2, {0.5, 0.5, 0.5, 0}), PreconditionError);
  EXPECT_THROW(GlcmMatrix::from_probabilities(2, {1, 0, 0}), DimensionError);
  EXPECT_THROW(GlcmMatrix::from_probabilities(2, {1.5, -0.5, 0, 0}), PreconditionError);
}

TEST(HaralickProperty, MatchesNaiveTranscription) {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    const auto cells = testing::random_glcm_cells(rng, n, rng.below(2) == 1);
    const auto got = haralick_features(GlcmMatrix::from_probabilities(n, cells)).to_array();
    const auto want = testing::naive_haralick(cells, n);
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_NEAR(got[k], want[k], kTol) << HaralickVector::names()[k] << " trial " << trial;
    }
  }
}

TEST(HaralickProperty, EnergyAndEntropyBounds) {
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    std::vector<double> cells;
    if (trial % 5 == 0) {
      cells.assign(n * n, 0.0);
      cells[rng.below(n * n)] = 1.0;
    } else {
      cells = testing::random_glcm_cells(rng, n, false);
    }
    const auto f = haralick_features(GlcmMatrix::from_probabilities(n, cells));
    const auto nonzero = std::count_if(cells.begin(), cells.end(), [](double v) { return v > 0; });
    EXPECT_LE(f.energy, 1.0 + kTol);
    EXPECT_EQ(std::abs(f.energy - 1.0) < kTol, nonzero == 1);
    EXPECT_LE(f.entropy, 2.0 * std::log2(static_cast<double>(n)) + kTol);
  }
}

TEST(HaralickProperty, RelabelingKeepsEnergyAndEntropy) {
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const auto cells = testing::random_glcm_cells(rng, n, false);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<double> relabeled(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) relabeled[perm[i] * n + perm[j]] = cells[i * n + j];
    }
    const auto a = haralick_features(GlcmMatrix::from_probabilities(n, cells));
    const auto b = haralick_features(GlcmMatrix::from_probabilities(n, relabeled));
    EXPECT_NEAR(a.energy, b.energy, kTol);
    EXPECT_NEAR(a.entropy, b.entropy, kTol);
  }
}

TEST(Haralick, NamesFollowFieldOrder) {
  const auto& names = HaralickVector::names();
  EXPECT_STREQ(names[0], "energy");
  EXPECT_STREQ(names[3], "entropy");
  EXPECT_STREQ(names[12], "imc2");
}

}  // namespace
}  // namespace genn
