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

#include <cstdlib>

#include "genn/error.hpp"
#include "genn/preprocess.hpp"
#include "support/support.hpp"

namespace genn {
namespace {

Raster vertical_step(std::size_t n) {
  Raster r(n, n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = n / 2; x < n; ++x) r.at(x, y) = 255;
  }
  return r;
}

Mask square_at(std::size_t w, std::size_t h, std::size_t x0, std::size_t y0, std::size_t side) {
  Mask m(w, h);
  for (std::size_t y = y0; y < y0 + side; ++y) {
    for (std::size_t x = x0; x < x0 + side; ++x) m.set(x, y);
  }
  return m;
}

const StructuringElement kSquare3 = StructuringElement::square(3);

TEST(StructuringElement, RequiresOddSideAndCenter) {
  EXPECT_THROW(StructuringElement(2, std::vector<std::uint8_t>(4, 1)), PreconditionError);
  EXPECT_THROW(StructuringElement(3, {1, 1, 1, 1, 0, 1, 1, 1, 1}), PreconditionError);
}

TEST(Canny, ConstantRasterHasNoEdges) {
  const Raster r(16, 16, std::vector<std::uint8_t>(256, 90));
  EXPECT_EQ(canny(r, {}).count(), 0u);
}

TEST(Canny, VerticalStepGivesThinLineAtTheStep) {
  const Raster r = vertical_step(32);
  const Mask e = canny(r, {1.0, 20.0, 60.0});
  const auto mag = gradient_magnitude(r, 1.0);
  for (std::size_t y = 1; y + 1 < 32; ++y) {
    std::size_t argmax = 0;
    for (std::size_t x = 1; x < 32; ++x) {
      if (mag[y * 32 + x] > mag[y * 32 + argmax]) argmax = x;
    }
    std::vector<std::size_t> xs;
    for (std::size_t x = 0; x < 32; ++x) {
      if (e.test(x, y)) xs.push_back(x);
    }
    ASSERT_EQ(xs.size(), 1u) << "row " << y;
    EXPECT_LE(std::abs(static_cast<long>(xs[0]) - 16), 1);
    EXPECT_LE(std::abs(static_cast<long>(xs[0]) - static_cast<long>(argmax)), 1);
  }
}

TEST(Canny, HorizontalStepIsTheTranspose) {
  const Raster r = vertical_step(32);
  EXPECT_EQ(canny(testing::transpose(r), {}), testing::transpose(canny(r, {})));
}

TEST(Canny, RejectsBadParameters) {
  const Raster r(8, 8);
  EXPECT_THROW(canny(r, {0.0, 20, 60}), PreconditionError);
  EXPECT_THROW(canny(r, {1.0, 60, 20}), PreconditionError);
  EXPECT_THROW(canny(Raster(2, 8), {}), PreconditionError);
}

TEST(CannyProperty, TransposeCommutes) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Raster r = testing::random_raster(rng, 5 + rng.below(20), 5 + rng.below(20));
    const CannyParams p{rng.uniform(0.6, 2.0), 15.0, 45.0};
    EXPECT_EQ(canny(testing::transpose(r), p), testing::transpose(canny(r, p)));
  }
}

TEST(CannyProperty, EdgesHaveMagnitudeAtLeastLowThreshold) {
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const Raster r = testing::random_raster(rng, 8 + rng.below(16), 8 + rng.below(16));
    const CannyParams p{1.0, 30.0, 80.0};
    const Mask e = canny(r, p);
    const auto mag = gradient_magnitude(r, p.sigma);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e.bits()[i]) {
        EXPECT_GE(mag[i], p.low_thr);
      }
    }
  }
}

TEST(Erode, SinglePixelVanishes) {
  Mask m(5, 5);
  m.set(2, 2);
  EXPECT_EQ(erode(m, kSquare3).count(), 0u);
}

TEST(Erode, FullMaskLosesBorder) {
  const Mask m(6, 5, std::vector<std::uint8_t>(30, 1));
  const Mask e = erode(m, kSquare3);
  for (std::size_t y = 0; y < 5; ++y) {
    for (std::size_t x = 0; x < 6; ++x) {
      const bool border = x == 0 || y == 0 || x == 5 || y == 4;
      EXPECT_EQ(e.test(x, y), !border) << x << "," << y;
    }
  }
}

TEST(Erode, SolidSquareShrinksByOne) {
  EXPECT_EQ(erode(square_at(9, 9, 2, 2, 5), kSquare3), square_at(9, 9, 3, 3, 3));
}

TEST(Dilate, CenterPixelGrowsToBlock) {
  Mask m(5, 5);
  m.set(2, 2);
  EXPECT_EQ(dilate(m, kSquare3), square_at(5, 5, 1, 1, 3));
}

TEST(Dilate, EmptyStaysEmpty) { EXPECT_EQ(dilate(Mask(4, 4), kSquare3), Mask(4, 4)); }

TEST(Dilate, TwoPixelsJoinIntoThreeByFive) {
  Mask m(9, 9);
  m.set(3, 4);
  m.set(5, 4);
  Mask expected(9, 9);
  for (std::size_t y = 3; y <= 5; ++y) {
    for (std::size_t x = 2; x <= 6; ++x) expected.set(x, y);
  }
  EXPECT_EQ(dilate(m, kSquare3), expected);
}

TEST(Dilate, TranslatesByFootprintOffsets) {
  // Footprint with the center and its east neighbor: dilation adds the east pixel.
  const StructuringElement se(3, {0, 0, 0, 0, 1, 1, 0, 0, 0});
  Mask m(5, 1);
  m.set(2, 0);
  const Mask d = dilate(m, se);
  EXPECT_FALSE(d.test(1, 0));
  EXPECT_TRUE(d.test(2, 0));
  EXPECT_TRUE(d.test(3, 0));
}

TEST(Open, RemovesSpeckKeepsSquare) {
  Mask speck(7, 7);
  speck.set(3, 3);
  EXPECT_EQ(open(speck, kSquare3).count(), 0u);
  const Mask sq = square_at(9, 9, 2, 2, 5);
  EXPECT_EQ(open(sq, kSquare3), sq);
}

TEST(MorphologyProperty, OpeningIsIdempotentAndAntiExtensive) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Mask m = testing::random_mask(rng, 4 + rng.below(20), 4 + rng.below(20), rng.uniform(0.2, 0.8));
    std::vector<std::uint8_t> bits(9);
    for (auto& b : bits) b = rng.below(2);
    bits[4] = 1;
    const StructuringElement se = rng.below(2) ? kSquare3 : StructuringElement(3, bits);
    const Mask o = open(m, se);
    EXPECT_EQ(open(o, se), o);
    EXPECT_TRUE(o.subset_of(m));
  }
}

TEST(MorphologyProperty, ErodeInsideMaskInsideDilate) {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Mask m = testing::random_mask(rng, 3 + rng.below(20), 3 + rng.below(20), rng.uniform(0.1, 0.9));
    std::vector<std::uint8_t> bits(25);
    for (auto& b : bits) b = rng.below(2);
    bits[12] = 1;
    const StructuringElement se(5, bits);
    EXPECT_TRUE(erode(m, se).subset_of(m));
    EXPECT_TRUE(m.subset_of(dilate(m, se)));
  }
}

}  // namespace
}  // namespace genn
