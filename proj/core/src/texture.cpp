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

#include "genn/texture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "genn/error.hpp"

namespace genn {

LevelGrid::LevelGrid(std::size_t width, std::size_t height, std::size_t levels, std::vector<std::uint16_t> cells)
    : width_(width), height_(height), levels_(levels), cells_(std::move(cells)) {
  if (levels < 2 || levels > 256) throw PreconditionError("GLCM levels must be in [2, 256]");
  if (cells_.size() != width * height) throw DimensionError("level grid payload has wrong size");
  for (auto c : cells_) {
    if (c >= levels) throw PreconditionError("level grid entry exceeds level count");
  }
}

LevelGrid quantize(const Raster& r, std::size_t levels) {
  if (levels < 2 || levels > 256) throw PreconditionError("GLCM levels must be in [2, 256]");
  std::vector<std::uint16_t> cells(r.size());
  std::transform(r.values().begin(), r.values().end(), cells.begin(),
                 [levels](std::uint8_t v) { return static_cast<std::uint16_t>(v * levels / 256); });
  return LevelGrid(r.width(), r.height(), levels, std::move(cells));
}

GlcmMatrix GlcmMatrix::from_probabilities(std::size_t levels, std::vector<double> cells, int dx, int dy,
                                          bool symmetric) {
  if (levels < 2 || levels > 256) throw PreconditionError("GLCM levels must be in [2, 256]");
  if (cells.size() != levels * levels) throw DimensionError("GLCM table must have levels^2 cells");
  double sum = 0.0;
  for (double c : cells) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw PreconditionError("GLCM cells must be finite and non-negative");
    sum += c;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw PreconditionError("GLCM cells must sum to 1");
  return GlcmMatrix(levels, std::move(cells), dx, dy, symmetric);
}

GlcmMatrix compute_glcm(const LevelGrid& grid, const Window& w, const GlcmConfig& cfg) {
  if (cfg.levels != grid.levels()) throw PreconditionError("GLCM config levels differ from the level grid");
  if (cfg.dx == 0 && cfg.dy == 0) throw PreconditionError("GLCM offset must be nonzero");
  if (!w.fits(grid.width(), grid.height())) throw DimensionError("GLCM window out of bounds");

  const std::size_t ng = grid.levels();
  std::vector<std::uint64_t> counts(ng * ng, 0);
  std::uint64_t total = 0;
  const long size = static_cast<long>(w.size);
  // Pairs (p, p + offset) with both ends inside the window.
  const long x_lo = std::max(0L, -static_cast<long>(cfg.dx));
  const long x_hi = std::min(size, size - static_cast<long>(cfg.dx));
  const long y_lo = std::max(0L, -static_cast<long>(cfg.dy));
  const long y_hi = std::min(size, size - static_cast<long>(cfg.dy));
  for (long y = y_lo; y < y_hi; ++y) {
    for (long x = x_lo; x < x_hi; ++x) {
      const auto a = grid.at(w.x0 + static_cast<std::size_t>(x), w.y0 + static_cast<std::size_t>(y));
      const auto b = grid.at(w.x0 + static_cast<std::size_t>(x + cfg.dx), w.y0 + static_cast<std::size_t>(y + cfg.dy));
      ++counts[a * ng + b];
      ++total;
      if (cfg.symmetric) {
        ++counts[b * ng + a];
        ++total;
      }
    }
  }
  if (total == 0) throw PreconditionError("GLCM window contains no pixel pair for the offset");

  std::vector<double> cells(ng * ng);
  const double norm = static_cast<double>(total);
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<double>(counts[i]) / norm;
  return GlcmMatrix(ng, std::move(cells), cfg.dx, cfg.dy, cfg.symmetric);
}

GlcmMatrix compute_glcm(const Raster& r, const Window& w, const GlcmConfig& cfg) {
  if (!w.fits(r.width(), r.height())) throw DimensionError("GLCM window out of bounds");
  // Quantize only the window.
  std::vector<std::uint16_t> cells(w.size * w.size);
  for (std::size_t y = 0; y < w.size; ++y) {
    for (std::size_t x = 0; x < w.size; ++x) {
      cells[y * w.size + x] = static_cast<std::uint16_t>(r.at(w.x0 + x, w.y0 + y) * cfg.levels / 256);
    }
  }
  return compute_glcm(LevelGrid(w.size, w.size, cfg.levels, std::move(cells)), Window{0, 0, w.size}, cfg);
}

std::array<double, HaralickVector::kCount> HaralickVector::to_array() const noexcept {
  return {energy,      correlation,        inertia,
          entropy,     inverse_difference_moment,
          sum_average, sum_variance,       sum_entropy,
          difference_average,              difference_variance,
          difference_entropy,              imc1,
          imc2};
}

const std::array<const char*, HaralickVector::kCount>& HaralickVector::names() noexcept {
  static const std::array<const char*, kCount> kNames = {
      "energy",      "correlation",  "inertia",     "entropy",            "inverse_difference_moment",
      "sum_average", "sum_variance", "sum_entropy", "difference_average", "difference_variance",
      "difference_entropy",          "imc1",        "imc2"};
  return kNames;
}

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

HaralickVector haralick_features(const GlcmMatrix& g) {
  const std::size_t ng = g.levels();
  std::vector<double> px(ng, 0.0), py(ng, 0.0), psum(2 * ng - 1, 0.0), pdiff(ng, 0.0);
  HaralickVector f;
  double sum_ij = 0.0;
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < ng; ++j) {
      const double p = g.at(i, j);
      if (p == 0.0) continue;
      px[i] += p;
      py[j] += p;
      psum[i + j] += p;
      const std::size_t d = i > j ? i - j : j - i;
      pdiff[d] += p;
      const double dd = static_cast<double>(d * d);
      f.energy += p * p;
      f.inertia += dd * p;
      f.entropy -= plogp(p);
      f.inverse_difference_moment += p / (1.0 + dd);
      sum_ij += static_cast<double>(i * j) * p;
    }
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ng; ++i) {
    mx += static_cast<double>(i) * px[i];
    my += static_cast<double>(i) * py[i];
  }
  double vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < ng; ++i) {
    vx += (static_cast<double>(i) - mx) * (static_cast<double>(i) - mx) * px[i];
    vy += (static_cast<double>(i) - my) * (static_cast<double>(i) - my) * py[i];
  }
  if (vx > 0.0 && vy > 0.0) {
    f.correlation = std::clamp((sum_ij - mx * my) / std::sqrt(vx * vy), -1.0, 1.0);
  }

  for (std::size_t k = 0; k < psum.size(); ++k) {
    f.sum_average += static_cast<double>(k) * psum[k];
    f.sum_entropy -= plogp(psum[k]);
  }
  for (std::size_t k = 0; k < psum.size(); ++k) {
    const double dk = static_cast<double>(k) - f.sum_average;
    f.sum_variance += dk * dk * psum[k];
  }
  for (std::size_t k = 0; k < ng; ++k) {
    f.difference_average += static_cast<double>(k) * pdiff[k];
    f.difference_entropy -= plogp(pdiff[k]);
  }
  for (std::size_t k = 0; k < ng; ++k) {
    const double dk = static_cast<double>(k) - f.difference_average;
    f.difference_variance += dk * dk * pdiff[k];
  }

  double hx = 0.0, hy = 0.0, hxy1 = 0.0, hxy2 = 0.0;
  for (std::size_t i = 0; i < ng; ++i) {
    hx -= plogp(px[i]);
    hy -= plogp(py[i]);
  }
  for (std::size_t i = 0; i < ng; ++i) {
    if (px[i] == 0.0) continue;
    for (std::size_t j = 0; j < ng; ++j) {
      if (py[j] == 0.0) continue;
      const double q = px[i] * py[j];
      hxy1 -= g.at(i, j) * std::log2(q);
      hxy2 -= q * std::log2(q);
    }
  }
  const double hmax = std::max(hx, hy);
  if (hmax > 0.0) f.imc1 = (f.entropy - hxy1) / hmax;
  const double gap_nats = std::max(0.0, hxy2 - f.entropy) * std::numbers::ln2;
  f.imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * gap_nats)));
  return f;
}

}  // namespace genn
