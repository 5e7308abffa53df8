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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "genn/geometry.hpp"
#include "genn/raster.hpp"

namespace genn::tools {

// Scene spec text, one setting per line, '#' starts a comment:
//
//   width = 512                global settings come first
//   height = 512
//   seed = 7
//   background_mean = 90
//   background_std = 12
//   patch_window = 9           optional: exemplar patches written by synth
//   patch_count = 200          optional: per class and polarity
//
//   [road]                     one block per element
//   points = 10,256 500,260    road: polyline vertices
//   width = 5                  road: ribbon width
//   gaps = 0.25:5 0.5:5        road: shadow gaps as arclength fraction:length
//   mean = 180                 all elements: gray mean and standard deviation
//   std = 8
//
//   [lake]   center = cx,cy   radii = rx,ry
//   [park] [building] [vehicle]   rect = x,y,w,h

enum class ElementKind { road, lake, park, building, vehicle };

std::string_view kind_name(ElementKind k) noexcept;

struct ShadowGap {
  double fraction = 0.5;  // position along the road, 0..1 of its length
  double length = 5.0;    // px of road length
};

struct SceneElement {
  ElementKind kind = ElementKind::road;
  std::vector<PointD> points;
  double width = 5.0;
  std::vector<ShadowGap> gaps;
  PointD center;
  double rx = 0.0;
  double ry = 0.0;
  long x = 0;
  long y = 0;
  long w = 0;
  long h = 0;
  double mean = 128.0;
  double std = 10.0;
};

struct SceneSpec {
  std::size_t width = 256;
  std::size_t height = 256;
  std::uint64_t seed = 1;
  double background_mean = 90.0;
  double background_std = 10.0;
  std::size_t patch_window = 0;
  std::size_t patch_count = 0;
  std::vector<SceneElement> elements;
};

/// Throws ParseError with the offending line; element geometry outside the
/// canvas is a PreconditionError.
SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::filesystem::path& path);

struct Scene {
  Raster raster;
  /// One mask per element kind present; masks are disjoint, later elements
  /// win where they overlap. Road truth includes its shadow gaps.
  std::map<std::string, Mask> truth;
  /// Road pixels darkened by shadow gaps.
  Mask shadow;
};

/// Gray values are mean + std * N(0, 1) from one seeded stream, background
/// first in row-major order, then each element in spec order; rounded and
/// clamped to 0..255. Shadow gap pixels are 0.
Scene generate_scene(const SceneSpec& spec);

struct PatchSet {
  std::vector<Raster> positives;
  std::vector<Raster> negatives;
};

/// Crops window x window patches from `image`. Positives are centered on
/// random pixels of `positive`; negatives alternate between pixels within
/// `window` px of it and pixels anywhere else outside it. Pixels of `exclude`
/// are never used as centers.
PatchSet sample_patches(const Raster& image, const Mask& positive, const Mask& exclude, std::size_t window,
                        std::size_t count, std::uint64_t seed);

Raster crop(const Raster& r, const Window& w);

}  // namespace genn::tools
