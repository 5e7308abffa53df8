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

#include "genn/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "genn/error.hpp"

namespace genn {

StructuringElement::StructuringElement(std::size_t side, std::vector<std::uint8_t> bits)
    : side_(side), bits_(std::move(bits)) {
  if (side % 2 == 0) throw PreconditionError("structuring element side must be odd");
  if (bits_.size() != side * side) throw DimensionError("structuring element footprint has wrong size");
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
  if (!bits_[(side / 2) * side + side / 2]) throw PreconditionError("structuring element center bit must be set");
}

StructuringElement StructuringElement::square(std::size_t side) {
  return StructuringElement(side, std::vector<std::uint8_t>(side * side, 1));
}

namespace {

using Plane = std::vector<double>;

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

// One separable pass with replicate border. `horizontal` selects the axis.
Plane convolve_axis(const Plane& src, long w, long h, const std::vector<double>& k, bool horizontal) {
  const long radius = static_cast<long>(k.size() / 2);
  Plane out(src.size());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long i = -radius; i <= radius; ++i) {
        const long sx = horizontal ? std::clamp(x + i, 0L, w - 1) : x;
        const long sy = horizontal ? y : std::clamp(y + i, 0L, h - 1);
        acc += k[static_cast<std::size_t>(i + radius)] * src[static_cast<std::size_t>(sy * w + sx)];
      }
      out[static_cast<std::size_t>(y * w + x)] = acc;
    }
  }
  return out;
}

// Averages both pass orders so that smoothing a transposed image yields the
// exact transpose (floating-point addition is commutative, not associative).
Plane smooth(const Raster& r, double sigma) {
  const long w = static_cast<long>(r.width());
  const long h = static_cast<long>(r.height());
  Plane src(r.values().begin(), r.values().end());
  const auto k = gaussian_kernel(sigma);
  const Plane hv = convolve_axis(convolve_axis(src, w, h, k, true), w, h, k, false);
  const Plane vh = convolve_axis(convolve_axis(src, w, h, k, false), w, h, k, true);
  Plane out(src.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (hv[i] + vh[i]);
  return out;
}

struct Gradients {
  Plane gx, gy, mag;
};

Gradients sobel(const Plane& s, long w, long h) {
  Gradients g{Plane(s.size()), Plane(s.size()), Plane(s.size())};
  auto at = [&](long x, long y) {
    return s[static_cast<std::size_t>(std::clamp(y, 0L, h - 1) * w + std::clamp(x, 0L, w - 1))];
  };
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      // gx and gy are written as mirror images of each other.
      const double gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
      const double gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
      const auto i = static_cast<std::size_t>(y * w + x);
      g.gx[i] = gx;
      g.gy[i] = gy;
      g.mag[i] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return g;
}

}  // namespace

std::vector<double> gradient_magnitude(const Raster& r, double sigma) {
  if (!(sigma > 0.0)) throw PreconditionError("canny: sigma must be > 0");
  const long w = static_cast<long>(r.width());
  const long h = static_cast<long>(r.height());
  return sobel(smooth(r, sigma), w, h).mag;
}

Mask canny(const Raster& r, const CannyParams& p) {
  if (r.width() < 3 || r.height() < 3) throw PreconditionError("canny: raster must be at least 3x3");
  if (!(p.sigma > 0.0)) throw PreconditionError("canny: sigma must be > 0");
  if (!(p.low_thr > 0.0 && p.low_thr < p.high_thr)) {
    throw PreconditionError("canny: thresholds must satisfy 0 < low < high");
  }
  const long w = static_cast<long>(r.width());
  const long h = static_cast<long>(r.height());
  const Gradients g = sobel(smooth(r, p.sigma), w, h);
  auto mag = [&](long x, long y) {
    return g.mag[static_cast<std::size_t>(std::clamp(y, 0L, h - 1) * w + std::clamp(x, 0L, w - 1))];
  };

  // Non-maximum suppression. Bin edges at 22.5 and 67.5 degrees, tested with
  // expressions that swap exactly under gx <-> gy.
  const double tan22 = std::sqrt(2.0) - 1.0;
  std::vector<std::uint8_t> thin(static_cast<std::size_t>(w * h), 0);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y * w + x);
      const double m = g.mag[i];
      if (m <= 0.0) continue;
      const double ax = std::abs(g.gx[i]);
      const double ay = std::abs(g.gy[i]);
      bool keep;
      if (ay <= tan22 * ax) {
        keep = m > mag(x - 1, y) && m >= mag(x + 1, y);
      } else if (ax <= tan22 * ay) {
        keep = m > mag(x, y - 1) && m >= mag(x, y + 1);
      } else if ((g.gx[i] > 0.0) == (g.gy[i] > 0.0)) {
        keep = m > mag(x - 1, y - 1) && m >= mag(x + 1, y + 1);
      } else {
        // This pair maps onto itself under transposition, so ties are kept on both sides.
        keep = m >= mag(x + 1, y - 1) && m >= mag(x - 1, y + 1);
      }
      if (keep) thin[i] = 1;
    }
  }

  Mask out(r.width(), r.height());
  std::deque<std::pair<long, long>> queue;
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y * w + x);
      if (thin[i] && g.mag[i] >= p.high_thr) {
        out.set(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
        queue.emplace_back(x, y);
      }
    }
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    for (long dy = -1; dy <= 1; ++dy) {
      for (long dx = -1; dx <= 1; ++dx) {
        const long nx = x + dx;
        const long ny = y + dy;
        if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const auto j = static_cast<std::size_t>(ny * w + nx);
        if (thin[j] && g.mag[j] >= p.low_thr && !out.test(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny))) {
          out.set(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny));
          queue.emplace_back(nx, ny);
        }
      }
    }
  }
  return out;
}

Mask erode(const Mask& m, const StructuringElement& se) {
  const long c = static_cast<long>(se.side() / 2);
  Mask out(m.width(), m.height());
  for (std::size_t y = 0; y < m.height(); ++y) {
    for (std::size_t x = 0; x < m.width(); ++x) {
      bool all = true;
      for (std::size_t j = 0; j < se.side() && all; ++j) {
        for (std::size_t i = 0; i < se.side() && all; ++i) {
          if (!se.test(i, j)) continue;
          all = m.test_signed(static_cast<long>(x) + static_cast<long>(i) - c,
                              static_cast<long>(y) + static_cast<long>(j) - c);
        }
      }
      if (all) out.set(x, y);
    }
  }
  return out;
}

Mask dilate(const Mask& m, const StructuringElement& se) {
  const long c = static_cast<long>(se.side() / 2);
  const long w = static_cast<long>(m.width());
  const long h = static_cast<long>(m.height());
  Mask out(m.width(), m.height());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      if (!m.test(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) continue;
      for (std::size_t j = 0; j < se.side(); ++j) {
        for (std::size_t i = 0; i < se.side(); ++i) {
          if (!se.test(i, j)) continue;
          const long tx = x + static_cast<long>(i) - c;
          const long ty = y + static_cast<long>(j) - c;
          if (tx >= 0 && ty >= 0 && tx < w && ty < h) out.set(static_cast<std::size_t>(tx), static_cast<std::size_t>(ty));
        }
      }
    }
  }
  return out;
}

Mask open(const Mask& m, const StructuringElement& se) { return dilate(erode(m, se), se); }

}  // namespace genn
