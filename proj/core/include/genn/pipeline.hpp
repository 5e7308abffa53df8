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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "genn/geometry.hpp"
#include "genn/nn.hpp"
#include "genn/preprocess.hpp"
#include "genn/raster.hpp"
#include "genn/rules.hpp"
#include "genn/som.hpp"
#include "genn/texture.hpp"

namespace genn {

inline constexpr std::uint32_t kBundleFormatVersion = 1;

/// Label reserved for rules that remove an object from the extraction.
inline constexpr const char* kRejectLabel = "reject";
/// Label and rule name of objects no rule matched.
inline constexpr const char* kNnOnlyLabel = "nn-only";

/// Knobs applied when a bundle is run over an image.
struct ExtractParams {
  double stretch_low = 0.01;
  double stretch_high = 0.99;
  /// Canny edge pixels are cleared from the accepted mask, separating
  /// touching objects along strong boundaries.
  bool use_canny = false;
  CannyParams canny;
  bool use_opening = true;
  std::size_t opening_side = 3;
  /// A window is accepted when the feature class wins with at least this output.
  double accept_threshold = 0.5;
  bool bridge = false;
  BridgeParams bridge_params;

  bool operator==(const ExtractParams&) const = default;
};

struct TrainParams {
  std::size_t window_size = 9;
  GlcmConfig glcm;
  std::size_t hidden = 16;
  TrainConfig nn;
  /// SOM grid shape; 0 rows or columns trains no SOM.
  std::size_t som_rows = 0;
  std::size_t som_cols = 0;
  SomConfig som;
  ExtractParams extract;
  std::string rules_text;
};

/// Everything needed to extract one feature class.
struct ModelBundle {
  std::uint32_t format_version = kBundleFormatVersion;
  std::string class_name;
  std::size_t window_size = 9;
  GlcmConfig glcm;
  std::array<double, HaralickVector::kCount> haralick_mean{};
  std::array<double, HaralickVector::kCount> haralick_std{};
  MlpNetwork network{std::vector<std::size_t>{1, 1}};
  std::optional<SomGrid> som;
  std::string rules_text;
  ExtractParams params;

  /// Window pixels scaled to [0, 1] followed by the 13 standardized Haralick
  /// features of `grid` (the quantized `r`) over the same window.
  std::vector<double> feature_vector(const Raster& r, const LevelGrid& grid, const Window& w) const;

  bool operator==(const ModelBundle&) const = default;
};

/// Trains a [dim, hidden, 2] network (output 0 = feature, 1 = non-feature) on
/// windows sampled from the exemplars on a dense grid with stride
/// max(1, window_size / 2). Exemplars are used as given, so they should come
/// from imagery already contrast stretched.
ModelBundle train_pipeline(const std::vector<Raster>& positives, const std::vector<Raster>& negatives,
                           const std::string& class_name, const TrainParams& params);

struct ExtractedObject {
  ObjectRecord record;
  std::string label;
  std::string rule_name;
  /// Best matching SOM unit, -1 when the bundle has no SOM.
  long som_cell = -1;
};

struct ExtractionResult {
  Mask mask;
  std::vector<ExtractedObject> objects;
  /// Objects removed by a rule labeling them "reject".
  std::vector<ExtractedObject> rule_rejected;
  /// Windows (one per pixel) the network did not accept.
  std::size_t rejected_count = 0;
};

struct ExtractOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Replaces the bundle's own rules when set.
  std::optional<RuleSet> rules;
};

/// Stretch, window scan at stride 1 labeling each center pixel (windows are
/// clamped inside the image near borders), optional edge removal and opening,
/// component analysis, rules, then optional gap bridging. The result does not
/// depend on the thread count.
ExtractionResult extract(const Raster& r, const ModelBundle& b, const ExtractOptions& options = {});

// Bundle file layout (".genn"):
//
//   GENN-BUNDLE\n
//   key=value\n ...                      scalar fields, format_version first
//   section <name> <byte length>\n<payload>\n ...
//   checksum=<8 lowercase hex digits>\n
//
// Array payloads hold one number per line printed with 17 significant digits.
// The checksum is the CRC-32 (zlib polynomial) of every byte before the
// "checksum=" line.
void save_bundle(const ModelBundle& b, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

std::string serialize_bundle(const ModelBundle& b);
ModelBundle parse_bundle(const std::string& bytes);

}  // namespace genn
