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

/// Fully connected feed-forward network with a logistic sigmoid on every
/// layer. Layer l maps layer_sizes[l] inputs to layer_sizes[l + 1] outputs;
/// its weight matrix is stored row-major as fan_out x fan_in.
class MlpNetwork {
 public:
  /// All weights and biases zero.
  explicit MlpNetwork(std::vector<std::size_t> layer_sizes);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t input_size() const noexcept { return sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.back(); }
  /// Number of weight layers (layer_sizes().size() - 1).
  std::size_t depth() const noexcept { return weights_.size(); }

  std::span<double> weights(std::size_t layer) noexcept { return weights_[layer]; }
  std::span<const double> weights(std::size_t layer) const noexcept { return weights_[layer]; }
  std::span<double> biases(std::size_t layer) noexcept { return biases_[layer]; }
  std::span<const double> biases(std::size_t layer) const noexcept { return biases_[layer]; }

  std::size_t parameter_count() const noexcept;

  bool operator==(const MlpNetwork&) const = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;
};

/// Weights drawn layer by layer, row-major, from U[-1/sqrt(fan_in),
/// +1/sqrt(fan_in)) using Rng(seed); biases zero.
MlpNetwork init_network(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

/// Logistic function clamped to the open interval (0, 1).
double sigmoid(double z) noexcept;

std::vector<double> forward(const MlpNetwork& net, std::span<const double> input);

/// Input/target pairs stored column-wise: inputs[k] and targets[k] belong
/// together.
class TrainingSet {
 public:
  TrainingSet(std::size_t input_dim, std::size_t output_dim);

  /// Targets must be finite and lie in [0, 1].
  void add(std::vector<double> input, std::vector<double> target);
  /// Adds a sample whose target is the one-hot vector of `class_index`.
  void add_one_hot(std::vector<double> input, std::size_t class_index);

  std::size_t size() const noexcept { return inputs_.size(); }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  const std::vector<double>& input(std::size_t k) const noexcept { return inputs_[k]; }
  const std::vector<double>& target(std::size_t k) const noexcept { return targets_[k]; }

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::vector<std::vector<double>> inputs_;
  std::vector<std::vector<double>> targets_;
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t max_epochs = 100;
  double target_mse = 0.0;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

struct TrainResult {
  MlpNetwork network;
  /// Mean over samples of the per-sample loss, one entry per epoch run.
  std::vector<double> loss_history;
};

/// Online gradient descent on the per-sample loss
///   E = (1 / n_out) * sum_k (output_k - target_k)^2.
/// Each epoch visits every sample once (in an order reshuffled by
/// Rng(cfg.seed) when cfg.shuffle) and records the mean of the pre-update
/// sample losses. Stops after max_epochs or once an epoch's loss is
/// <= target_mse. Throws DivergenceError on a non-finite epoch loss.
TrainResult train_backprop(MlpNetwork net, const TrainingSet& data, const TrainConfig& cfg);

/// Analytic gradients of E for one sample, laid out like the network.
struct Gradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

Gradient backprop_gradient(const MlpNetwork& net, std::span<const double> input, std::span<const double> target);

/// Largest relative disagreement between backprop_gradient and central
/// differences (E(w + eps) - E(w - eps)) / (2 eps) over every weight and
/// bias, with denominator max(|analytic|, |numeric|, 1e-12). The loss is
/// evaluated in extended precision for the numeric side.
double gradient_check(const MlpNetwork& net, std::span<const double> input, std::span<const double> target,
                      double eps);

struct Classification {
  std::size_t class_index = 0;
  double confidence = 0.0;
  /// Squared distance between the output and the one-hot vector of class_index.
  double error_value = 0.0;
};

/// Argmax with ties going to the lowest index.
Classification classify_output(std::span<const double> output);
Classification classify(const MlpNetwork& net, std::span<const double> input);

}  // namespace genn
