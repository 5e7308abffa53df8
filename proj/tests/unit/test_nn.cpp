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

#include "genn/error.hpp"
#include "genn/nn.hpp"
#include "support/support.hpp"

namespace genn {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

TrainingSet xor_set() {
  TrainingSet s(2, 1);
  s.add({0, 0}, {0});
  s.add({0, 1}, {1});
  s.add({1, 0}, {1});
  s.add({1, 1}, {0});
  return s;
}

TEST(Init, SameSeedIsBitIdentical) {
  EXPECT_EQ(init_network({4, 3, 2}, 99), init_network({4, 3, 2}, 99));
}

TEST(Init, DifferentSeedsDiffer) { EXPECT_FALSE(init_network({4, 3, 2}, 1) == init_network({4, 3, 2}, 2)); }

TEST(Init, WeightShapesFollowLayerSizes) {
  const auto net = init_network({2, 2, 1}, 5);
  ASSERT_EQ(net.depth(), 2u);
  EXPECT_EQ(net.weights(0).size(), 4u);
  EXPECT_EQ(net.weights(1).size(), 2u);
  EXPECT_EQ(net.biases(0).size(), 2u);
  EXPECT_EQ(net.biases(1).size(), 1u);
  EXPECT_EQ(net.parameter_count(), 9u);
}

TEST(Init, UniformWithinFanInBoundAndZeroBiases) {
  const auto net = init_network({16, 8, 3}, 7);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.layer_sizes()[l]));
    for (double w : net.weights(l)) EXPECT_LE(std::abs(w), bound);
    for (double b : net.biases(l)) EXPECT_EQ(b, 0.0);
  }
}

TEST(Init, RejectsInvalidLayerLists) {
  EXPECT_THROW(init_network({3}, 1), PreconditionError);
  EXPECT_THROW(init_network({3, 0, 2}, 1), PreconditionError);
}

TEST(Forward, ZeroNetworkGivesOneHalf) {
  const MlpNetwork net({3, 4, 2});
  for (double o : forward(net, std::vector<double>{1, -2, 3})) EXPECT_EQ(o, 0.5);
}

TEST(Forward, SingleUnitAtZero) {
  MlpNetwork net({1, 1});
  net.weights(0)[0] = 1.0;
  EXPECT_EQ(forward(net, std::vector<double>{0.0}), std::vector<double>{0.5});
}

TEST(Forward, SigmoidOfLogThreeIsThreeQuarters) {
  MlpNetwork net({2, 1});
  net.weights(0)[0] = std::log(3.0);
  const auto out = forward(net, std::vector<double>{1.0, 5.0});
  EXPECT_NEAR(out[0], 0.75, 1e-15);
}

TEST(Forward, DimensionMismatch) {
  EXPECT_THROW(forward(MlpNetwork({2, 1}), std::vector<double>{1.0}), DimensionError);
}

TEST(ForwardProperty, OutputsStrictlyInsideUnitInterval) {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = init_network({3, 4, 2}, rng.next());
    for (std::size_t l = 0; l < net.depth(); ++l) {
      for (double& w : net.weights(l)) w *= 1000.0;
    }
    for (double o : forward(net, random_vector(rng, 3, -100, 100))) {
      EXPECT_GT(o, 0.0);
      EXPECT_LT(o, 1.0);
    }
  }
}

TEST(Train, ZeroEpochsRejected) {
  TrainConfig cfg;
  cfg.max_epochs = 0;
  EXPECT_THROW(train_backprop(MlpNetwork({2, 1}), xor_set(), cfg), PreconditionError);
}

TEST(Train, ZeroErrorSampleLeavesWeightsUnchanged) {
  const MlpNetwork net({2, 3, 1});
  TrainingSet data(2, 1);
  data.add({0.3, 0.7}, {0.5});
  TrainConfig cfg;
  cfg.max_epochs = 3;
  const auto result = train_backprop(net, data, cfg);
  EXPECT_EQ(result.network, net);
  for (double mse : result.loss_history) EXPECT_EQ(mse, 0.0);
}

TEST(Train, StopsAtTargetMse) {
  TrainConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.max_epochs = 10000;
  cfg.target_mse = 0.2;
  const auto r = train_backprop(init_network({2, 4, 1}, 3), xor_set(), cfg);
  EXPECT_LT(r.loss_history.size(), 10000u);
  EXPECT_LE(r.loss_history.back(), 0.2);
}

TEST(Train, LearnsXor) {
  int converged = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.max_epochs = 10000;
    cfg.seed = seed;
    const auto r = train_backprop(init_network({2, 4, 1}, seed), xor_set(), cfg);
    const TrainingSet data = xor_set();
    double mse = 0.0;
    for (std::size_t k = 0; k < data.size(); ++k) {
      const double d = forward(r.network, data.input(k))[0] - data.target(k)[0];
      mse += d * d / 4.0;
    }
    converged += mse < 0.05;
  }
  EXPECT_GE(converged, 4);
}

TEST(TrainProperty, DeterministicAndFinite) {
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    TrainingSet data(3, 2);
    for (int k = 0; k < 12; ++k) data.add_one_hot(random_vector(rng, 3, -1, 1), rng.below(2));
    TrainConfig cfg;
    cfg.max_epochs = 20;
    cfg.seed = rng.next();
    const auto net = init_network({3, 4, 2}, cfg.seed);
    const auto a = train_backprop(net, data, cfg);
    const auto b = train_backprop(net, data, cfg);
    EXPECT_EQ(a.network, b.network);
    EXPECT_EQ(a.loss_history, b.loss_history);
    for (double mse : a.loss_history) EXPECT_TRUE(std::isfinite(mse));
  }
}

TEST(TrainingSet, ValidatesSamples) {
  TrainingSet s(2, 2);
  EXPECT_THROW(s.add({1.0}, {0, 1}), DimensionError);
  EXPECT_THROW(s.add({1, 2}, {0, 1.5}), PreconditionError);
  EXPECT_THROW(s.add_one_hot({1, 2}, 2), PreconditionError);
}

TEST(GradientCheck, RandomSmallNetwork) {
  Rng rng(53);
  const auto net = init_network({3, 5, 2}, 17);
  EXPECT_LT(gradient_check(net, random_vector(rng, 3, -1, 1), std::vector<double>{1.0, 0.0}, 1e-5), 1e-5);
}

TEST(GradientCheck, ZeroWeightsNonzeroTarget) {
  const MlpNetwork net({3, 4, 2});
  EXPECT_LT(gradient_check(net, std::vector<double>{0.5, -1, 2}, std::vector<double>{1.0, 0.25}, 1e-5), 1e-6);
}

TEST(GradientCheck, ZeroEpsilonRejected) {
  EXPECT_THROW(gradient_check(MlpNetwork({1, 1}), std::vector<double>{1}, std::vector<double>{1}, 0.0),
               PreconditionError);
}

TEST(Gradient, ZeroAtZeroError) {
  const MlpNetwork net({2, 2, 1});
  const auto g = backprop_gradient(net, std::vector<double>{0.1, 0.2}, std::vector<double>{0.5});
  for (const auto& layer : g.weights) {
    for (double v : layer) EXPECT_EQ(v, 0.0);
  }
}

TEST(Classify, PicksLargestOutput) {
  const std::vector<double> out{0.9, 0.1};
  const auto c = classify_output(out);
  EXPECT_EQ(c.class_index, 0u);
  EXPECT_DOUBLE_EQ(c.confidence, 0.9);
  EXPECT_NEAR(c.error_value, 0.02, 1e-15);
}

TEST(Classify, TiesGoToLowestIndex) {
  const std::vector<double> out{0.5, 0.5};
  EXPECT_EQ(classify_output(out).class_index, 0u);
}

TEST(Classify, SingleOutput) {
  const std::vector<double> out{0.7};
  const auto c = classify_output(out);
  EXPECT_EQ(c.class_index, 0u);
  EXPECT_NEAR(c.error_value, 0.09, 1e-15);
}

TEST(Classify, ThroughNetwork) {
  const auto c = classify(MlpNetwork({2, 3}), std::vector<double>{1, 1});
  EXPECT_EQ(c.class_index, 0u);
  EXPECT_EQ(c.confidence, 0.5);
}

TEST(Divergence, MessageNamesEpoch) {
  const DivergenceError e(7);
  EXPECT_EQ(e.epoch(), 7u);
  EXPECT_NE(std::string(e.what()).find("epoch 7"), std::string::npos);
}

}  // namespace
}  // namespace genn
