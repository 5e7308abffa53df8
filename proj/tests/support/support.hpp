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

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "genn/raster.hpp"
#include "genn/rng.hpp"

namespace genn::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    Rng rng(reinterpret_cast<std::uintptr_t>(this) ^ ++counter);
    path_ = std::filesystem::temp_directory_path() / ("genn-test-" + std::to_string(rng.next()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

inline Raster random_raster(Rng& rng, std::size_t w, std::size_t h, unsigned max_value = 255) {
  Raster r(w, h);
  for (auto& v : r.values()) v = static_cast<std::uint8_t>(rng.below(max_value + 1));
  return r;
}

inline Mask random_mask(Rng& rng, std::size_t w, std::size_t h, double density) {
  Mask m(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) m.set(x, y, rng.uniform01() < density);
  }
  return m;
}

inline Mask transpose(const Mask& m) {
  Mask t(m.height(), m.width());
  for (std::size_t y = 0; y < m.height(); ++y) {
    for (std::size_t x = 0; x < m.width(); ++x) t.set(y, x, m.test(x, y));
  }
  return t;
}

inline Raster transpose(const Raster& r) {
  Raster t(r.height(), r.width());
  for (std::size_t y = 0; y < r.height(); ++y) {
    for (std::size_t x = 0; x < r.width(); ++x) t.at(y, x) = r.at(x, y);
  }
  return t;
}

inline double iou(const Mask& a, const Mask& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += a.bits()[i] && b.bits()[i];
    uni += a.bits()[i] || b.bits()[i];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Random probability table over n x n cells, optionally symmetric, with some
/// cells forced to zero.
inline std::vector<double> random_glcm_cells(Rng& rng, std::size_t n, bool symmetric) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = symmetric ? i : 0; j < n; ++j) {
      const double v = rng.uniform01() < 0.25 ? 0.0 : rng.uniform01();
      c[i * n + j] = v;
      if (symmetric) c[j * n + i] = v;
    }
  }
  double s = 0.0;
  for (double v : c) s += v;
  if (s == 0.0) {
    c[0] = 1.0;
    s = 1.0;
  }
  for (double& v : c) v /= s;
  return c;
}

/// Textbook transcription of the 13 texture statistics with 1-based gray
/// levels as printed in the literature, loops written out longhand. Field
/// order matches HaralickVector::to_array(). Used as an independent oracle.
inline std::array<double, 13> naive_haralick(const std::vector<double>& p, std::size_t ng) {
  auto P = [&](std::size_t i, std::size_t j) { return p[(i - 1) * ng + (j - 1)]; };
  auto lg = [](double v) { return v > 0.0 ? std::log(v) / std::log(2.0) : 0.0; };

  std::vector<double> px(ng + 1, 0.0), py(ng + 1, 0.0);
  for (std::size_t i = 1; i <= ng; ++i) {
    for (std::size_t j = 1; j <= ng; ++j) {
      px[i] += P(i, j);
      py[j] += P(i, j);
    }
  }
  std::vector<double> pxy_sum(2 * ng + 1, 0.0);   // index k = i + j, 2..2ng
  std::vector<double> pxy_diff(ng, 0.0);          // index k = |i - j|, 0..ng-1
  for (std::size_t i = 1; i <= ng; ++i) {
    for (std::size_t j = 1; j <= ng; ++j) {
      pxy_sum[i + j] += P(i, j);
      pxy_diff[i > j ? i - j : j - i] += P(i, j);
    }
  }

  double f1 = 0, f3 = 0, f5 = 0, f9 = 0;
  for (std::size_t i = 1; i <= ng; ++i) {
    for (std::size_t j = 1; j <= ng; ++j) {
      const double v = P(i, j);
      const double d = static_cast<double>(i) - static_cast<double>(j);
      f1 += v * v;
      f3 += d * d * v;
      f5 += v / (1.0 + d * d);
      f9 -= v * lg(v);
    }
  }

  double mux = 0, muy = 0;
  for (std::size_t i = 1; i <= ng; ++i) {
    mux += static_cast<double>(i) * px[i];
    muy += static_cast<double>(i) * py[i];
  }
  double sx2 = 0, sy2 = 0, sij = 0;
  for (std::size_t i = 1; i <= ng; ++i) {
    sx2 += (i - mux) * (i - mux) * px[i];
    sy2 += (i - muy) * (i - muy) * py[i];
  }
  for (std::size_t i = 1; i <= ng; ++i) {
    for (std::size_t j = 1; j <= ng; ++j) sij += (i - mux) * (j - muy) * P(i, j);
  }
  double f2 = (sx2 > 0 && sy2 > 0) ? sij / std::sqrt(sx2 * sy2) : 0.0;
  if (f2 > 1) f2 = 1;
  if (f2 < -1) f2 = -1;

  // Sum statistics on 1-based levels give an average shifted by 2; the
  // implementation works with 0-based levels, so shift back.
  double f6 = 0, f8 = 0;
  for (std::size_t k = 2; k <= 2 * ng; ++k) {
    f6 += static_cast<double>(k) * pxy_sum[k];
    f8 -= pxy_sum[k] * lg(pxy_sum[k]);
  }
  double f7 = 0;
  for (std::size_t k = 2; k <= 2 * ng; ++k) f7 += (k - f6) * (k - f6) * pxy_sum[k];
  f6 -= 2.0;

  double dmean = 0, f11 = 0;
  for (std::size_t k = 0; k < ng; ++k) {
    dmean += static_cast<double>(k) * pxy_diff[k];
    f11 -= pxy_diff[k] * lg(pxy_diff[k]);
  }
  double f10 = 0;
  for (std::size_t k = 0; k < ng; ++k) f10 += (k - dmean) * (k - dmean) * pxy_diff[k];

  double hx = 0, hy = 0, hxy1 = 0, hxy2 = 0;
  for (std::size_t i = 1; i <= ng; ++i) {
    hx -= px[i] * lg(px[i]);
    hy -= py[i] * lg(py[i]);
  }
  for (std::size_t i = 1; i <= ng; ++i) {
    for (std::size_t j = 1; j <= ng; ++j) {
      const double q = px[i] * py[j];
      hxy1 -= P(i, j) * lg(q);
      hxy2 -= q * lg(q);
    }
  }
  const double hmax = hx > hy ? hx : hy;
  const double f12 = hmax > 0 ? (f9 - hxy1) / hmax : 0.0;
  const double gap_nats = (hxy2 - f9) * std::log(2.0);
  const double inner = 1.0 - std::exp(-2.0 * gap_nats);
  const double f13 = inner > 0 ? std::sqrt(inner) : 0.0;

  return {f1, f2, f3, f9, f5, f6, f7, f8, dmean, f10, f11, f12, f13};
}

}  // namespace genn::testing
