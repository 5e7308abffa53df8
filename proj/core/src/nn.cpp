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

#include "genn/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "genn/error.hpp"
#include "genn/rng.hpp"

namespace genn {

MlpNetwork::MlpNetwork(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw PreconditionError("network needs at least two layers");
  for (auto s : sizes_) {
    if (s == 0) throw PreconditionError("layer sizes must be >= 1");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.emplace_back(sizes_[l + 1] * sizes_[l], 0.0);
    biases_.emplace_back(sizes_[l + 1], 0.0);
  }
}

std::size_t MlpNetwork::parameter_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

MlpNetwork init_network(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
  MlpNetwork net(layer_sizes);
  Rng rng(seed);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes[l]));
    for (auto& w : net.weights(l)) w = rng.uniform(-bound, bound);
  }
  return net;
}

namespace {

template <typename T>
T sigmoid_t(T z) noexcept {
  constexpr T lo = static_cast<T>(std::numeric_limits<double>::min());
  constexpr T hi = static_cast<T>(1.0 - 0x1.0p-53);
  const T s = T(1) / (T(1) + std::exp(-z));
  return std::clamp(s, lo, hi);
}

// acts[0] = input, acts[l + 1] = sigmoid(W_l acts[l] + b_l).
template <typename T>
std::vector<std::vector<T>> forward_all(const MlpNetwork& net, std::span<const double> input) {
  if (input.size() != net.input_size()) {
    throw DimensionError("input length " + std::to_string(input.size()) + " does not match network input " +
                         std::to_string(net.input_size()));
  }
  std::vector<std::vector<T>> acts;
  acts.reserve(net.depth() + 1);
  acts.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const auto w = net.weights(l);
    const auto b = net.biases(l);
    const std::size_t fan_in = net.layer_sizes()[l];
    const std::size_t fan_out = net.layer_sizes()[l + 1];
    const auto& prev = acts.back();
    std::vector<T> next(fan_out);
    for (std::size_t r = 0; r < fan_out; ++r) {
      T z = static_cast<T>(b[r]);
      const double* row = w.data() + r * fan_in;
      for (std::size_t c = 0; c < fan_in; ++c) z += static_cast<T>(row[c]) * prev[c];
      next[r] = sigmoid_t(z);
    }
    acts.push_back(std::move(next));
  }
  return acts;
}

template <typename T>
T sample_loss(std::span<const T> out, std::span<const double> target) {
  T acc = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const T d = out[k] - static_cast<T>(target[k]);
    acc += d * d;
  }
  return acc / static_cast<T>(out.size());
}

void check_target(const MlpNetwork& net, std::span<const double> target) {
  if (target.size() != net.output_size()) {
    throw DimensionError("target length " + std::to_string(target.size()) + " does not match network output " +
                         std::to_string(net.output_size()));
  }
}

// Fills `grad` with dE/dparam for one sample and returns E.
double accumulate_gradient(const MlpNetwork& net, std::span<const double> input, std::span<const double> target,
                           Gradient& grad) {
  const auto acts = forward_all<double>(net, input);
  const auto& out = acts.back();
  const double loss = sample_loss<double>(out, target);

  const double scale = 2.0 / static_cast<double>(out.size());
  std::vector<double> delta(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) delta[k] = scale * (out[k] - target[k]) * out[k] * (1.0 - out[k]);

  for (std::size_t l = net.depth(); l-- > 0;) {
    const std::size_t fan_in = net.layer_sizes()[l];
    const std::size_t fan_out = net.layer_sizes()[l + 1];
    const auto& prev = acts[l];
    auto& gw = grad.weights[l];
    auto& gb = grad.biases[l];
    for (std::size_t r = 0; r < fan_out; ++r) {
      gb[r] = delta[r];
      for (std::size_t c = 0; c < fan_in; ++c) gw[r * fan_in + c] = delta[r] * prev[c];
    }
    if (l == 0) break;
    const auto w = net.weights(l);
    std::vector<double> below(fan_in, 0.0);
    for (std::size_t r = 0; r < fan_out; ++r) {
      for (std::size_t c = 0; c < fan_in; ++c) below[c] += w[r * fan_in + c] * delta[r];
    }
    for (std::size_t c = 0; c < fan_in; ++c) below[c] *= prev[c] * (1.0 - prev[c]);
    delta = std::move(below);
  }
  return loss;
}

Gradient zero_gradient(const MlpNetwork& net) {
  Gradient g;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    g.weights.emplace_back(net.weights(l).size(), 0.0);
    g.biases.emplace_back(net.biases(l).size(), 0.0);
  }
  return g;
}

}  // namespace

double sigmoid(double z) noexcept { return sigmoid_t(z); }

std::vector<double> forward(const MlpNetwork& net, std::span<const double> input) {
  return forward_all<double>(net, input).back();
}

TrainingSet::TrainingSet(std::size_t input_dim, std::size_t output_dim)
    : input_dim_(input_dim), output_dim_(output_dim) {
  if (input_dim == 0 || output_dim == 0) throw PreconditionError("training set dimensions must be >= 1");
}

void TrainingSet::add(std::vector<double> input, std::vector<double> target) {
  if (input.size() != input_dim_) throw DimensionError("training input has wrong length");
  if (target.size() != output_dim_) throw DimensionError("training target has wrong length");
  for (double t : target) {
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("training targets must lie in [0, 1]");
  }
  for (double v : input) {
    if (!std::isfinite(v)) throw PreconditionError("training inputs must be finite");
  }
  inputs_.push_back(std::move(input));
  targets_.push_back(std::move(target));
}

void TrainingSet::add_one_hot(std::vector<double> input, std::size_t class_index) {
  if (class_index >= output_dim_) throw PreconditionError("class index out of range");
  std::vector<double> target(output_dim_, 0.0);
  target[class_index] = 1.0;
  add(std::move(input), std::move(target));
}

TrainResult train_backprop(MlpNetwork net, const TrainingSet& data, const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw PreconditionError("learning_rate must be > 0");
  if (cfg.max_epochs < 1) throw PreconditionError("max_epochs must be >= 1");
  if (!(cfg.target_mse >= 0.0)) throw PreconditionError("target_mse must be >= 0");
  if (data.input_dim() != net.input_size() || data.output_dim() != net.output_size()) {
    throw DimensionError("training set dimensions do not match the network");
  }
  if (data.size() == 0) throw PreconditionError("training set is empty");

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Gradient grad = zero_gradient(net);
  TrainResult result{std::move(net), {}};
  MlpNetwork& model = result.network;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t k : order) {
      total += accumulate_gradient(model, data.input(k), data.target(k), grad);
      for (std::size_t l = 0; l < model.depth(); ++l) {
        auto w = model.weights(l);
        auto b = model.biases(l);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * grad.weights[l][i];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= cfg.learning_rate * grad.biases[l][i];
      }
    }
    const double mse = total / static_cast<double>(data.size());
    if (!std::isfinite(mse)) throw DivergenceError(epoch);
    result.loss_history.push_back(mse);
    if (mse <= cfg.target_mse) break;
  }
  return result;
}

Gradient backprop_gradient(const MlpNetwork& net, std::span<const double> input, std::span<const double> target) {
  check_target(net, target);
  Gradient g = zero_gradient(net);
  accumulate_gradient(net, input, target, g);
  return g;
}

double gradient_check(const MlpNetwork& net, std::span<const double> input, std::span<const double> target,
                      double eps) {
  if (!(eps > 0.0)) throw PreconditionError("gradient_check: eps must be > 0");
  check_target(net, target);
  const Gradient analytic = backprop_gradient(net, input, target);
  MlpNetwork probe = net;
  auto loss_at = [&]() {
    const auto acts = forward_all<long double>(probe, input);
    return sample_loss<long double>(acts.back(), target);
  };
  double worst = 0.0;
  auto compare = [&](double& param, double a) {
    const double saved = param;
    param = saved + eps;
    const long double up = loss_at();
    param = saved - eps;
    const long double down = loss_at();
    param = saved;
    const double numeric = static_cast<double>((up - down) / (2.0L * static_cast<long double>(eps)));
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  };
  for (std::size_t l = 0; l < probe.depth(); ++l) {
    auto w = probe.weights(l);
    for (std::size_t i = 0; i < w.size(); ++i) compare(w[i], analytic.weights[l][i]);
    auto b = probe.biases(l);
    for (std::size_t i = 0; i < b.size(); ++i) compare(b[i], analytic.biases[l][i]);
  }
  return worst;
}

Classification classify_output(std::span<const double> output) {
  if (output.empty()) throw DimensionError("cannot classify an empty output");
  Classification c;
  for (std::size_t k = 1; k < output.size(); ++k) {
    if (output[k] > output[c.class_index]) c.class_index = k;
  }
  c.confidence = output[c.class_index];
  for (std::size_t k = 0; k < output.size(); ++k) {
    const double d = output[k] - (k == c.class_index ? 1.0 : 0.0);
    c.error_value += d * d;
  }
  return c;
}

Classification classify(const MlpNetwork& net, std::span<const double> input) {
  return classify_output(forward(net, input));
}

}  // namespace genn
