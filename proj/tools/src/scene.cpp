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

#include "genn/tools/scene.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#include "genn/error.hpp"
#include "genn/preprocess.hpp"
#include "genn/rng.hpp"

namespace genn::tools {

namespace {

constexpr std::array<std::string_view, 5> kKindNames = {"road", "lake", "park", "building", "vehicle"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto k = s.find(sep);
    out.push_back(trim(s.substr(0, k)));
    if (k == std::string_view::npos) return out;
    s.remove_prefix(k + 1);
  }
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto part : split(s, ' ')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, 1); }

  double number(std::string_view s) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      fail("expected a number, found '" + std::string(s) + "'");
    }
    return v;
  }

  template <typename Int>
  Int integer(std::string_view s) const {
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail("expected an integer, found '" + std::string(s) + "'");
    }
    return v;
  }

  std::vector<double> tuple(std::string_view s, std::size_t n) const {
    const auto parts = split(s, ',');
    if (parts.size() != n) fail("expected " + std::to_string(n) + " comma-separated values, found '" + std::string(s) + "'");
    std::vector<double> out;
    for (auto p : parts) out.push_back(number(p));
    return out;
  }

 private:
  std::size_t line_;
};

void set_element_key(SceneElement& e, std::string_view key, std::string_view value, const LineParser& p) {
  if (key == "mean") {
    e.mean = p.number(value);
  } else if (key == "std") {
    e.std = p.number(value);
  } else if (e.kind == ElementKind::road && key == "points") {
    e.points.clear();
    for (auto w : words(value)) {
      const auto xy = p.tuple(w, 2);
      e.points.push_back({xy[0], xy[1]});
    }
  } else if (e.kind == ElementKind::road && key == "width") {
    e.width = p.number(value);
  } else if (e.kind == ElementKind::road && key == "gaps") {
    e.gaps.clear();
    for (auto w : words(value)) {
      const auto parts = split(w, ':');
      if (parts.size() != 2) p.fail("expected gap as fraction:length, found '" + std::string(w) + "'");
      e.gaps.push_back({p.number(parts[0]), p.number(parts[1])});
    }
  } else if (e.kind == ElementKind::lake && key == "center") {
    const auto c = p.tuple(value, 2);
    e.center = {c[0], c[1]};
  } else if (e.kind == ElementKind::lake && key == "radii") {
    const auto r = p.tuple(value, 2);
    e.rx = r[0];
    e.ry = r[1];
  } else if (e.kind != ElementKind::road && e.kind != ElementKind::lake && key == "rect") {
    const auto parts = split(value, ',');
    if (parts.size() != 4) p.fail("expected rect = x,y,w,h");
    e.x = p.integer<long>(parts[0]);
    e.y = p.integer<long>(parts[1]);
    e.w = p.integer<long>(parts[2]);
    e.h = p.integer<long>(parts[3]);
  } else {
    p.fail("unknown key '" + std::string(key) + "' for " + std::string(kind_name(e.kind)));
  }
}

void validate(const SceneSpec& s) {
  if (s.width == 0 || s.height == 0) throw PreconditionError("scene width and height must be >= 1");
  if (s.background_std < 0.0) throw PreconditionError("background_std must be >= 0");
  const double W = static_cast<double>(s.width);
  const double H = static_cast<double>(s.height);
  for (std::size_t k = 0; k < s.elements.size(); ++k) {
    const auto& e = s.elements[k];
    const std::string tag = std::string(kind_name(e.kind)) + " element " + std::to_string(k);
    if (e.std < 0.0) throw PreconditionError(tag + ": std must be >= 0");
    switch (e.kind) {
      case ElementKind::road:
        if (e.points.size() < 2) throw PreconditionError(tag + ": needs at least two points");
        if (!(e.width > 0.0)) throw PreconditionError(tag + ": width must be > 0");
        for (const auto& pt : e.points) {
          if (pt.x < 0 || pt.y < 0 || pt.x > W - 1 || pt.y > H - 1) {
            throw PreconditionError(tag + ": point outside the canvas");
          }
        }
        for (const auto& g : e.gaps) {
          if (g.fraction < 0.0 || g.fraction > 1.0 || !(g.length > 0.0)) {
            throw PreconditionError(tag + ": gap fraction must be in [0, 1] and length > 0");
          }
        }
        break;
      case ElementKind::lake:
        if (!(e.rx > 0.0) || !(e.ry > 0.0)) throw PreconditionError(tag + ": radii must be > 0");
        if (e.center.x - e.rx < 0 || e.center.y - e.ry < 0 || e.center.x + e.rx > W - 1 ||
            e.center.y + e.ry > H - 1) {
          throw PreconditionError(tag + ": ellipse outside the canvas");
        }
        break;
      default:
        if (e.w < 1 || e.h < 1) throw PreconditionError(tag + ": rect size must be >= 1");
        if (e.x < 0 || e.y < 0 || e.x + e.w > static_cast<long>(s.width) || e.y + e.h > static_cast<long>(s.height)) {
          throw PreconditionError(tag + ": rect outside the canvas");
        }
        break;
    }
  }
}

std::uint8_t to_gray(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

// Pixels covered by an element in row-major order, with a shadow flag per pixel.
struct Footprint {
  std::vector<Pixel> pixels;
  std::vector<bool> shadow;
};

Footprint road_footprint(const SceneElement& e, std::size_t width, std::size_t height) {
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < e.points.size(); ++i) {
    cum.push_back(cum.back() + std::hypot(e.points[i].x - e.points[i - 1].x, e.points[i].y - e.points[i - 1].y));
  }
  const double total = cum.back();
  const double half = e.width / 2.0;
  double minx = e.points[0].x, maxx = minx, miny = e.points[0].y, maxy = miny;
  for (const auto& p : e.points) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const long x0 = std::max(0L, static_cast<long>(std::floor(minx - half)));
  const long y0 = std::max(0L, static_cast<long>(std::floor(miny - half)));
  const long x1 = std::min(static_cast<long>(width) - 1, static_cast<long>(std::ceil(maxx + half)));
  const long y1 = std::min(static_cast<long>(height) - 1, static_cast<long>(std::ceil(maxy + half)));

  Footprint f;
  for (long y = y0; y <= y1; ++y) {
    for (long x = x0; x <= x1; ++x) {
      double best = std::numeric_limits<double>::infinity();
      double arc = 0.0;
      for (std::size_t i = 1; i < e.points.size(); ++i) {
        const PointD a = e.points[i - 1];
        const PointD b = e.points[i];
        const double vx = b.x - a.x, vy = b.y - a.y;
        const double len2 = vx * vx + vy * vy;
        double u = len2 > 0.0 ? ((x - a.x) * vx + (y - a.y) * vy) / len2 : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        const double d = std::hypot(a.x + u * vx - x, a.y + u * vy - y);
        if (d < best) {
          best = d;
          arc = cum[i - 1] + u * (cum[i] - cum[i - 1]);
        }
      }
      if (best > half) continue;
      bool dark = false;
      for (const auto& g : e.gaps) dark = dark || std::abs(arc - g.fraction * total) < g.length / 2.0;
      f.pixels.push_back({static_cast<int>(x), static_cast<int>(y)});
      f.shadow.push_back(dark);
    }
  }
  return f;
}

Footprint footprint(const SceneElement& e, std::size_t width, std::size_t height) {
  if (e.kind == ElementKind::road) return road_footprint(e, width, height);
  Footprint f;
  if (e.kind == ElementKind::lake) {
    const long y0 = static_cast<long>(std::floor(e.center.y - e.ry));
    const long y1 = static_cast<long>(std::ceil(e.center.y + e.ry));
    const long x0 = static_cast<long>(std::floor(e.center.x - e.rx));
    const long x1 = static_cast<long>(std::ceil(e.center.x + e.rx));
    for (long y = y0; y <= y1; ++y) {
      for (long x = x0; x <= x1; ++x) {
        const double u = (x - e.center.x) / e.rx;
        const double v = (y - e.center.y) / e.ry;
        if (u * u + v * v <= 1.0) f.pixels.push_back({static_cast<int>(x), static_cast<int>(y)});
      }
    }
  } else {
    for (long y = e.y; y < e.y + e.h; ++y) {
      for (long x = e.x; x < e.x + e.w; ++x) f.pixels.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
  }
  f.shadow.assign(f.pixels.size(), false);
  return f;
}

}  // namespace

std::string_view kind_name(ElementKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

SceneSpec parse_scene_spec(std::string_view text) {
  SceneSpec spec;
  SceneElement* current = nullptr;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const LineParser p(line_no);

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      const auto it = std::find(kKindNames.begin(), kKindNames.end(), name);
      if (it == kKindNames.end()) p.fail("unknown element kind '" + std::string(name) + "'");
      spec.elements.push_back({});
      current = &spec.elements.back();
      current->kind = static_cast<ElementKind>(it - kKindNames.begin());
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) p.fail("expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (current != nullptr) {
      set_element_key(*current, key, value, p);
    } else if (key == "width") {
      spec.width = p.integer<std::size_t>(value);
    } else if (key == "height") {
      spec.height = p.integer<std::size_t>(value);
    } else if (key == "seed") {
      spec.seed = p.integer<std::uint64_t>(value);
    } else if (key == "background_mean") {
      spec.background_mean = p.number(value);
    } else if (key == "background_std") {
      spec.background_std = p.number(value);
    } else if (key == "patch_window") {
      spec.patch_window = p.integer<std::size_t>(value);
    } else if (key == "patch_count") {
      spec.patch_count = p.integer<std::size_t>(value);
    } else {
      p.fail("unknown setting '" + std::string(key) + "'");
    }
  }
  validate(spec);
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_scene_spec(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.message(), e.line(), e.column());
  }
}

Scene generate_scene(const SceneSpec& spec) {
  validate(spec);
  const std::size_t W = spec.width;
  const std::size_t H = spec.height;
  Rng rng(spec.seed);
  Scene s;
  s.raster = Raster(W, H);
  for (auto& v : s.raster.values()) v = to_gray(spec.background_mean + spec.background_std * rng.normal());

  // Per-pixel owner (element index) for painter's-order truth.
  std::vector<long> owner(W * H, -1);
  std::vector<std::uint8_t> shadow(W * H, 0);
  for (std::size_t k = 0; k < spec.elements.size(); ++k) {
    const auto& e = spec.elements[k];
    const Footprint f = footprint(e, W, H);
    for (std::size_t i = 0; i < f.pixels.size(); ++i) {
      const auto x = static_cast<std::size_t>(f.pixels[i].x);
      const auto y = static_cast<std::size_t>(f.pixels[i].y);
      const std::uint8_t g = to_gray(e.mean + e.std * rng.normal());
      s.raster.at(x, y) = f.shadow[i] ? 0 : g;
      owner[y * W + x] = static_cast<long>(k);
      shadow[y * W + x] = f.shadow[i];
    }
  }
  for (const auto& e : spec.elements) s.truth.try_emplace(std::string(kind_name(e.kind)), W, H);
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] < 0) {
      shadow[i] = 0;
      continue;
    }
    const auto& e = spec.elements[static_cast<std::size_t>(owner[i])];
    s.truth.at(std::string(kind_name(e.kind))).set(i % W, i / W);
  }
  s.shadow = Mask(W, H, std::move(shadow));
  return s;
}

Raster crop(const Raster& r, const Window& w) {
  if (!w.fits(r.width(), r.height())) throw DimensionError("crop window outside the raster");
  Raster out(w.size, w.size);
  for (std::size_t y = 0; y < w.size; ++y) {
    for (std::size_t x = 0; x < w.size; ++x) out.at(x, y) = r.at(w.x0 + x, w.y0 + y);
  }
  return out;
}

PatchSet sample_patches(const Raster& image, const Mask& positive, const Mask& exclude, std::size_t window,
                        std::size_t count, std::uint64_t seed) {
  if (!positive.same_shape(exclude) || positive.width() != image.width() || positive.height() != image.height()) {
    throw DimensionError("patch masks must match the image shape");
  }
  if (window == 0 || window > image.width() || window > image.height()) {
    throw PreconditionError("patch window must fit in the image");
  }
  const Mask near = dilate(positive, StructuringElement::square(2 * window + 1));
  std::vector<std::size_t> pos, neg_near, neg_far;
  const std::size_t W = image.width();
  for (std::size_t i = 0; i < positive.size(); ++i) {
    if (exclude.bits()[i]) continue;
    if (positive.bits()[i]) {
      pos.push_back(i);
    } else if (near.bits()[i]) {
      neg_near.push_back(i);
    } else {
      neg_far.push_back(i);
    }
  }
  if (pos.empty()) throw PreconditionError("no positive pixels to sample");
  if (neg_near.empty() && neg_far.empty()) throw PreconditionError("no negative pixels to sample");

  Rng rng(seed);
  auto take = [&](const std::vector<std::size_t>& from) {
    const std::size_t i = from[rng.below(from.size())];
    return crop(image, Window::centered_clamped(i % W, i / W, window, image.width(), image.height()));
  };
  PatchSet out;
  for (std::size_t k = 0; k < count; ++k) out.positives.push_back(take(pos));
  for (std::size_t k = 0; k < count; ++k) {
    const bool use_near = (k % 2 == 0 && !neg_near.empty()) || neg_far.empty();
    out.negatives.push_back(take(use_near ? neg_near : neg_far));
  }
  return out;
}

}  // namespace genn::tools
