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

#include "genn/raster.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "genn/error.hpp"

namespace genn {

Raster::Raster(std::size_t width, std::size_t height)
    : Raster(width, height, std::vector<std::uint8_t>(width * height, 0)) {}

Raster::Raster(std::size_t width, std::size_t height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width == 0 || height == 0) throw PreconditionError("raster dimensions must be >= 1");
  if (values_.size() != width * height) {
    throw DimensionError("raster payload has " + std::to_string(values_.size()) + " values, expected " +
                         std::to_string(width * height));
  }
}

Mask::Mask(std::size_t width, std::size_t height) : width_(width), height_(height), bits_(width * height, 0) {}

Mask::Mask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (bits_.size() != width * height) {
    throw DimensionError("mask payload has " + std::to_string(bits_.size()) + " values, expected " +
                         std::to_string(width * height));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool Mask::subset_of(const Mask& other) const {
  if (!same_shape(other)) throw DimensionError("mask shapes differ");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

Raster Mask::to_raster() const {
  std::vector<std::uint8_t> v(bits_.size());
  std::transform(bits_.begin(), bits_.end(), v.begin(), [](std::uint8_t b) { return b ? 255 : 0; });
  return Raster(width_, height_, std::move(v));
}

Mask Mask::from_raster(const Raster& r) { return Mask(r.width(), r.height(), r.values()); }

Window Window::centered_clamped(std::size_t cx, std::size_t cy, std::size_t size, std::size_t width,
                                std::size_t height) {
  const std::size_t half = size / 2;
  auto place = [&](std::size_t c, std::size_t extent) {
    std::size_t lo = c > half ? c - half : 0;
    return std::min(lo, extent - size);
  };
  return Window{place(cx, width), place(cy, height), size};
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    const unsigned char c = static_cast<unsigned char>(data[pos]);
    if (std::isspace(c)) {
      ++pos;
    } else if (c == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#') ++pos;
  return data.substr(start, pos - start);
}

std::size_t parse_header_number(const std::string& tok, const std::string& what, const std::string& path) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw FormatError(path + ": malformed PGM header (" + what + ")");
  }
  try {
    return static_cast<std::size_t>(std::stoull(tok));
  } catch (const std::exception&) {
    throw FormatError(path + ": malformed PGM header (" + what + ")");
  }
}

}  // namespace

Raster load_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string name = path.string();

  std::size_t pos = 0;
  const std::string magic = next_token(data, pos);
  if (magic != "P2" && magic != "P5") throw FormatError(name + ": not a P2/P5 PGM file");
  const std::size_t width = parse_header_number(next_token(data, pos), "width", name);
  const std::size_t height = parse_header_number(next_token(data, pos), "height", name);
  const std::size_t maxval = parse_header_number(next_token(data, pos), "maxval", name);
  if (width == 0 || height == 0) throw FormatError(name + ": zero image dimension");
  if (maxval == 0) throw FormatError(name + ": malformed PGM header (maxval)");
  if (maxval > 255) throw FormatError(name + ": unsupported maxval " + std::to_string(maxval));

  std::vector<std::uint8_t> values(width * height);
  if (magic == "P5") {
    // Exactly one whitespace byte separates maxval from the raster.
    if (pos >= data.size()) throw FormatError(name + ": truncated PGM payload");
    ++pos;
    if (data.size() - pos < values.size()) throw FormatError(name + ": truncated PGM payload");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto v = static_cast<std::uint8_t>(data[pos + i]);
      if (v > maxval) throw FormatError(name + ": sample exceeds maxval");
      values[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string tok = next_token(data, pos);
      if (tok.empty()) throw FormatError(name + ": truncated PGM payload");
      const std::size_t v = parse_header_number(tok, "sample", name);
      if (v > maxval) throw FormatError(name + ": sample exceeds maxval");
      values[i] = static_cast<std::uint8_t>(v);
    }
  }
  return Raster(width, height, std::move(values));
}

void save_raster(const Raster& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << r.width() << ' ' << r.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.values().data()), static_cast<std::streamsize>(r.values().size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Mask load_mask(const std::filesystem::path& path) { return Mask::from_raster(load_raster(path)); }

void save_mask(const Mask& m, const std::filesystem::path& path) { save_raster(m.to_raster(), path); }

Raster histogram_stretch(const Raster& r, double low_pct, double high_pct) {
  if (!(low_pct >= 0.0 && low_pct < 0.5) || !(high_pct > 0.5 && high_pct <= 1.0)) {
    throw PreconditionError("histogram_stretch: percentiles must satisfy 0 <= low < 0.5 < high <= 1");
  }
  // Counting sort: quantiles straight from the cumulative histogram.
  std::array<std::size_t, 256> hist{};
  for (auto v : r.values()) ++hist[v];
  const std::size_t n = r.size();
  auto quantile = [&](double p) {
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::size_t seen = 0;
    for (int level = 0; level < 256; ++level) {
      seen += hist[static_cast<std::size_t>(level)];
      if (seen >= rank) return level;
    }
    return 255;
  };
  const int lo = quantile(low_pct);
  const int hi = quantile(high_pct);
  if (hi <= lo) return r;

  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    const double mapped = std::round(static_cast<double>(v - lo) * 255.0 / static_cast<double>(hi - lo));
    lut[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(std::clamp(mapped, 0.0, 255.0));
  }
  std::vector<std::uint8_t> out(r.values().size());
  std::transform(r.values().begin(), r.values().end(), out.begin(), [&](std::uint8_t v) { return lut[v]; });
  return Raster(r.width(), r.height(), std::move(out));
}

std::vector<double> flatten_window(const Raster& r, const Window& w) {
  if (w.size % 2 == 0) throw PreconditionError("window size must be odd");
  if (!w.fits(r.width(), r.height())) throw DimensionError("window out of raster bounds");
  std::vector<double> out;
  out.reserve(w.size * w.size);
  for (std::size_t y = w.y0; y < w.y0 + w.size; ++y) {
    for (std::size_t x = w.x0; x < w.x0 + w.size; ++x) out.push_back(static_cast<double>(r.at(x, y)) / 255.0);
  }
  return out;
}

}  // namespace genn
