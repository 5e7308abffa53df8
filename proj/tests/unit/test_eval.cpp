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
#include "genn/eval.hpp"
#include "support/support.hpp"

namespace genn {
namespace {

ConfusionMatrix two_by_two(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return ConfusionMatrix({"feature", "other"}, {a, b, c, d});
}

// Kappa recomputed from per-pixel agreement probabilities: p_o sums the
// chance a random pixel is on the diagonal, p_e the chance two independent
// draws (one from the truth marginal, one from the prediction marginal) agree.
double brute_force_kappa(const std::vector<std::vector<std::uint64_t>>& m) {
  const std::size_t k = m.size();
  double n = 0;
  for (const auto& row : m) {
    for (auto v : row) n += static_cast<double>(v);
  }
  double po = 0, pe = 0;
  for (std::size_t i = 0; i < k; ++i) po += static_cast<double>(m[i][i]) / n;
  for (std::size_t c = 0; c < k; ++c) {
    double truth_c = 0, pred_c = 0;
    for (std::size_t j = 0; j < k; ++j) {
      truth_c += static_cast<double>(m[c][j]) / n;
      pred_c += static_cast<double>(m[j][c]) / n;
    }
    pe += truth_c * pred_c;
  }
  return (po - pe) / (1 - pe);
}

TEST(ConfusionMatrix, IdenticalMasksHaveNoOffDiagonal) {
  Rng rng(111);
  const Mask m = testing::random_mask(rng, 9, 7, 0.4);
  const ConfusionMatrix cm = confusion_matrix(m, m);
  EXPECT_EQ(cm.at(0, 1), 0u);
  EXPECT_EQ(cm.at(1, 0), 0u);
  EXPECT_EQ(cm.at(1, 1), m.count());
  EXPECT_EQ(cm.total(), 63u);
}

TEST(ConfusionMatrix, ComplementHasNoDiagonal) {
  Rng rng(112);
  const Mask m = testing::random_mask(rng, 9, 7, 0.4);
  Mask inv(9, 7);
  for (std::size_t y = 0; y < 7; ++y) {
    for (std::size_t x = 0; x < 9; ++x) inv.set(x, y, !m.test(x, y));
  }
  const ConfusionMatrix cm = confusion_matrix(inv, m);
  EXPECT_EQ(cm.at(0, 0), 0u);
  EXPECT_EQ(cm.at(1, 1), 0u);
  EXPECT_EQ(overall_accuracy(cm), 0.0);
}

TEST(ConfusionMatrix, TenPixelStripHandTally) {
  // truth: 1111100000, predicted: 1111000100 -> pixel 4 missed, pixel 7 false alarm.
  const Mask truth(10, 1, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
  const Mask pred(10, 1, {1, 1, 1, 1, 0, 0, 0, 1, 0, 0});
  const ConfusionMatrix cm = confusion_matrix(pred, truth);
  EXPECT_EQ(cm.at(1, 1), 4u);
  EXPECT_EQ(cm.at(1, 0), 1u);
  EXPECT_EQ(cm.at(0, 1), 1u);
  EXPECT_EQ(cm.at(0, 0), 4u);
}

TEST(ConfusionMatrix, ShapeMismatchAndInvalidLabels) {
  EXPECT_THROW(confusion_matrix(Mask(3, 3), Mask(3, 4)), DimensionError);
  const std::vector<int> pred{0, 1, 2}, truth{0, 1, 1};
  EXPECT_THROW(confusion_matrix(pred, truth, {"a", "b"}), PreconditionError);
  EXPECT_THROW(ConfusionMatrix({"only"}, {1}), PreconditionError);
  EXPECT_THROW(ConfusionMatrix({"a", "b"}, {0, 0, 0, 0}), PreconditionError);
}

TEST(OverallAccuracy, Examples) {
  EXPECT_EQ(overall_accuracy(two_by_two(50, 0, 0, 50)), 1.0);
  EXPECT_DOUBLE_EQ(overall_accuracy(two_by_two(40, 10, 5, 45)), 0.85);
  EXPECT_EQ(overall_accuracy(two_by_two(0, 30, 20, 0)), 0.0);
}

TEST(Kappa, Examples) {
  EXPECT_EQ(kappa(two_by_two(50, 0, 0, 50)), 1.0);
  EXPECT_NEAR(kappa(two_by_two(25, 25, 25, 25)), 0.0, 1e-15);
  EXPECT_NEAR(kappa(two_by_two(40, 10, 5, 45)), 0.70, 1e-12);
}

TEST(Kappa, DegenerateSingleCell) {
  EXPECT_EQ(kappa(two_by_two(0, 0, 0, 17)), 1.0);
}

TEST(KappaProperty, MatchesBruteForce) {
  Rng rng(113);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.below(5);
    std::vector<std::vector<std::uint64_t>> m(k, std::vector<std::uint64_t>(k));
    std::vector<std::uint64_t> flat;
    for (auto& row : m) {
      for (auto& v : row) {
        v = rng.below(200);
        flat.push_back(v);
      }
    }
    m[0][0] += 1;
    flat[0] += 1;
    const ConfusionMatrix cm(std::vector<std::string>(k, "c"), flat);
    const double want = brute_force_kappa(m);
    if (!std::isfinite(want)) continue;
    EXPECT_NEAR(kappa(cm), want, 1e-12);
  }
}

TEST(KappaProperty, OneExactlyWhenOffDiagonalEmpty) {
  Rng rng(114);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    std::vector<std::uint64_t> flat(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) flat[i * k + i] = 1 + rng.below(50);
    const bool perturb = rng.below(2) == 1;
    if (perturb) flat[rng.below(k - 1) * k + k - 1] += 1 + rng.below(5);
    const ConfusionMatrix cm(std::vector<std::string>(k, "c"), flat);
    EXPECT_EQ(kappa(cm) == 1.0, !perturb);
  }
}

TEST(EvalProperty, PermutingClassesKeepsScores) {
  Rng rng(115);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.below(5);
    std::vector<std::uint64_t> flat(k * k);
    for (auto& v : flat) v = 1 + rng.below(100);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<std::uint64_t> permuted(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) permuted[perm[i] * k + perm[j]] = flat[i * k + j];
    }
    const ConfusionMatrix a(std::vector<std::string>(k, "c"), flat);
    const ConfusionMatrix b(std::vector<std::string>(k, "c"), permuted);
    EXPECT_NEAR(overall_accuracy(a), overall_accuracy(b), 1e-15);
    EXPECT_NEAR(kappa(a), kappa(b), 1e-12);
  }
}

TEST(ArealExtent, UnitArithmetic) {
  Mask m(50, 20, std::vector<std::uint8_t>(1000, 1));
  EXPECT_EQ(areal_extent(m, 10.0), 0.1);
  EXPECT_EQ(areal_extent(Mask(5, 5), 10.0), 0.0);
  EXPECT_THROW(areal_extent(m, 0.0), PreconditionError);
}

TEST(ArealExtentProperty, LinearInForegroundCount) {
  Rng rng(116);
  for (int trial = 0; trial < 100; ++trial) {
    const Mask m = testing::random_mask(rng, 1 + rng.below(40), 1 + rng.below(40), rng.uniform01());
    const double px = rng.uniform(0.5, 30.0);
    EXPECT_NEAR(areal_extent(m, px), static_cast<double>(m.count()) * areal_extent(Mask(1, 1, {1}), px), 1e-12);
  }
}

TEST(ArealComparison, LakeAreaRelativeError) {
  const ArealComparison c = compare_areas("Lake", 32.5, 28.01);
  EXPECT_NEAR(c.relative_error, 0.1382, 5e-5);
  EXPECT_EQ(compare_areas("x", 0.0, 0.0).relative_error, 0.0);
  EXPECT_TRUE(std::isinf(compare_areas("x", 0.0, 1.0).relative_error));
}

TEST(Report, NnApproachRow) {
  const std::vector<MethodReport> rows{{"NN Approach", {0.9612, 0.98, {}, {}}}};
  const std::string text = format_report(rows);
  EXPECT_NE(text.find("NN Approach"), std::string::npos);
  EXPECT_NE(text.find("0.98  96.12"), std::string::npos);
}

TEST(Report, DerivedKappaTwoDecimals) {
  const std::vector<MethodReport> rows{{"m", accuracy_report(two_by_two(40, 10, 5, 45))}};
  const std::string text = format_report(rows);
  EXPECT_NE(text.find("0.70  85.00"), std::string::npos);
}

TEST(Report, EmptyIsHeaderOnly) {
  const std::string text = format_report({});
  EXPECT_NE(text.find("Methodology"), std::string::npos);
  EXPECT_NE(text.find("Kappa"), std::string::npos);
  EXPECT_NE(text.find("Overall Accuracy (%)"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Report, ArealRows) {
  const std::vector<ArealComparison> areas{compare_areas("Lake", 32.5, 28.01)};
  const std::string text = format_report({}, areas);
  EXPECT_NE(text.find("Reference Area (km2)"), std::string::npos);
  EXPECT_NE(text.find("32.50"), std::string::npos);
  EXPECT_NE(text.find("28.01"), std::string::npos);
  EXPECT_NE(text.find("0.1382"), std::string::npos);
}

TEST(AccuracyReport, ProducerAndUserAccuracy) {
  const AccuracyReport r = accuracy_report(two_by_two(40, 10, 5, 45));
  ASSERT_EQ(r.producer_accuracy.size(), 2u);
  EXPECT_DOUBLE_EQ(r.producer_accuracy[0], 0.8);
  EXPECT_DOUBLE_EQ(r.producer_accuracy[1], 0.9);
  EXPECT_DOUBLE_EQ(r.user_accuracy[0], 40.0 / 45.0);
  EXPECT_DOUBLE_EQ(r.user_accuracy[1], 45.0 / 55.0);
}

}  // namespace
}  // namespace genn
