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

#include "genn/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "genn/error.hpp"
#include "genn/rng.hpp"

namespace genn {

SomGrid::SomGrid(std::size_t rows, std::size_t cols, std::size_t dim)
    : SomGrid(rows, cols, dim, std::vector<double>(rows * cols * dim, 0.0), false) {}

SomGrid::SomGrid(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> codebook, bool trained)
    : rows_(rows), cols_(cols), dim_(dim), codebook_(std::move(codebook)), trained_(trained) {
  if (rows == 0 || cols == 0 || dim == 0) throw PreconditionError("SOM grid dimensions must be >= 1");
  if (codebook_.size() != rows * cols * dim) throw DimensionError("SOM codebook has wrong size");
  for (double v : codebook_) {
    if (!std::isfinite(v)) throw PreconditionError("SOM codebook entries must be finite");
  }
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

BestMatch best_matching_unit(const SomGrid& g, std::span<const double> v) {
  if (v.size() != g.dim()) {
    throw DimensionError("SOM query has length " + std::to_string(v.size()) + ", grid expects " +
                         std::to_string(g.dim()));
  }
  std::size_t best = 0;
  double best_d2 = squared_distance(g.unit(0), v);
  for (std::size_t u = 1; u < g.units(); ++u) {
    const double d2 = squared_distance(g.unit(u), v);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = u;
    }
  }
  return BestMatch{best / g.cols(), best % g.cols(), std::sqrt(best_d2)};
}

SomGrid train_som(const std::vector<std::vector<double>>& samples, std::size_t rows, std::size_t cols,
                  const SomConfig& cfg) {
  if (samples.empty()) throw PreconditionError("train_som: no samples");
  const std::size_t dim = samples.front().size();
  if (dim == 0) throw PreconditionError("train_som: samples must have length >= 1");
  for (const auto& s : samples) {
    if (s.size() != dim) throw DimensionError("train_som: samples have inconsistent lengths");
  }
  if (cfg.epochs < 1) throw PreconditionError("train_som: epochs must be >= 1");
  if (!(cfg.lr0 > 0.0 && cfg.lr0 <= 1.0)) throw PreconditionError("train_som: lr0 must be in (0, 1]");
  if (!(cfg.radius0 > 0.0)) throw PreconditionError("train_som: radius0 must be > 0");

  SomGrid grid(rows, cols, dim);
  Rng rng(cfg.seed);

  std::vector<double> lo(samples.front()), hi(samples.front());
  for (const auto& s : samples) {
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], s[d]);
      hi[d] = std::max(hi[d], s[d]);
    }
  }
  for (std::size_t u = 0; u < grid.units(); ++u) {
    auto w = grid.unit(u);
    for (std::size_t d = 0; d < dim; ++d) w[d] = rng.uniform(lo[d], hi[d]);
  }

  const double lr_floor = cfg.lr0 * 0.01;
  const double radius_floor = 0.5;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    const double t = cfg.epochs > 1 ? static_cast<double>(e) / static_cast<double>(cfg.epochs - 1) : 0.0;
    const double lr = std::max(lr_floor, cfg.lr0 * std::pow(0.01, t));
    const double radius = std::max(radius_floor, cfg.radius0 * std::pow(radius_floor / cfg.radius0, t));
    const double two_r2 = 2.0 * radius * radius;
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t k : order) {
      const auto& x = samples[k];
      const BestMatch bmu = best_matching_unit(grid, x);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          const double dr = static_cast<double>(r) - static_cast<double>(bmu.row);
          const double dc = static_cast<double>(c) - static_cast<double>(bmu.col);
          const double h = std::exp(-(dr * dr + dc * dc) / two_r2);
          auto w = grid.unit(r * cols + c);
          for (std::size_t d = 0; d < dim; ++d) w[d] += lr * h * (x[d] - w[d]);
        }
      }
    }
  }
  grid.trained_ = true;
  return grid;
}

}  // namespace genn
