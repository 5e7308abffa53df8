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
#include <string>
#include <vector>

#include "genn/raster.hpp"

namespace genn {

/// Rows are reference (truth) classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix(std::vector<std::string> classes, std::vector<std::uint64_t> counts);

  std::size_t classes() const noexcept { return names_.size(); }
  const std::vector<std::string>& class_names() const noexcept { return names_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const noexcept {
    return counts_[truth * names_.size() + predicted];
  }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t row_sum(std::size_t truth) const noexcept;
  std::uint64_t column_sum(std::size_t predicted) const noexcept;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Binary masks: class 0 = background, class 1 = foreground.
ConfusionMatrix confusion_matrix(const Mask& predicted, const Mask& truth);

/// Label grids with values in [0, class_names.size()).
ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> truth,
                                 std::vector<std::string> class_names);

/// trace / n.
double overall_accuracy(const ConfusionMatrix& cm);

/// Cohen's kappa (p_o - p_e) / (1 - p_e), p_e = sum_i row_i * col_i / n^2.
/// When p_e == 1 the result is 1 if p_o == 1 and 0 otherwise.
double kappa(const ConfusionMatrix& cm);

struct AccuracyReport {
  double overall_accuracy = 0.0;
  double kappa = 0.0;
  std::vector<double> producer_accuracy;  // per class: diagonal / row sum
  std::vector<double> user_accuracy;      // per class: diagonal / column sum
};

/// Classes with an empty row (column) get producer (user) accuracy 0.
AccuracyReport accuracy_report(const ConfusionMatrix& cm);

/// foreground pixels * pixel_size_m^2 / 1e6.
double areal_extent(const Mask& m, double pixel_size_m);

struct ArealComparison {
  std::string feature_name;
  double reference_area_km2 = 0.0;
  double extracted_area_km2 = 0.0;
  /// |extracted - reference| / reference; 0 when both are 0, +inf when only
  /// the reference is 0.
  double relative_error = 0.0;
};

ArealComparison compare_areas(std::string feature_name, double reference_km2, double extracted_km2);

struct MethodReport {
  std::string methodology;
  AccuracyReport accuracy;
};

/// Fixed-width text: an accuracy table (kappa and overall accuracy in
/// percent, two decimals) and, when areal rows are given, an areal extent
/// table (areas two decimals, relative error four).
std::string format_report(std::span<const MethodReport> methods, std::span<const ArealComparison> areas = {});

}  // namespace genn
