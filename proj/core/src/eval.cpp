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

#include "genn/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "genn/error.hpp"

namespace genn {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes, std::vector<std::uint64_t> counts)
    : names_(std::move(classes)), counts_(std::move(counts)) {
  if (names_.size() < 2) throw PreconditionError("confusion matrix needs at least two classes");
  if (counts_.size() != names_.size() * names_.size()) throw DimensionError("confusion matrix counts must be k x k");
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (total_ == 0) throw PreconditionError("confusion matrix holds no samples");
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < classes(); ++j) s += at(truth, j);
  return s;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t predicted) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < classes(); ++i) s += at(i, predicted);
  return s;
}

ConfusionMatrix confusion_matrix(const Mask& predicted, const Mask& truth) {
  if (!predicted.same_shape(truth)) {
    throw DimensionError("shape mismatch: predicted " + std::to_string(predicted.width()) + "x" +
                         std::to_string(predicted.height()) + ", truth " + std::to_string(truth.width()) + "x" +
                         std::to_string(truth.height()));
  }
  std::vector<std::uint64_t> counts(4, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) ++counts[truth.bits()[i] * 2u + predicted.bits()[i]];
  return ConfusionMatrix({"background", "foreground"}, std::move(counts));
}

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> truth,
                                 std::vector<std::string> class_names) {
  if (predicted.size() != truth.size()) {
    throw DimensionError("shape mismatch: " + std::to_string(predicted.size()) + " predicted labels, " +
                         std::to_string(truth.size()) + " truth labels");
  }
  const std::size_t k = class_names.size();
  std::vector<std::uint64_t> counts(k * k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(truth[i]) >= k ||
        static_cast<std::size_t>(predicted[i]) >= k) {
      throw PreconditionError("label out of range at index " + std::to_string(i));
    }
    ++counts[static_cast<std::size_t>(truth[i]) * k + static_cast<std::size_t>(predicted[i])];
  }
  return ConfusionMatrix(std::move(class_names), std::move(counts));
}

double overall_accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw PreconditionError("overall_accuracy: empty confusion matrix");
  std::uint64_t trace = 0;
  for (std::size_t i = 0; i < cm.classes(); ++i) trace += cm.at(i, i);
  return static_cast<double>(trace) / static_cast<double>(cm.total());
}

double kappa(const ConfusionMatrix& cm) {
  const double po = overall_accuracy(cm);
  const double n = static_cast<double>(cm.total());
  double pe = 0.0;
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    pe += static_cast<double>(cm.row_sum(i)) * static_cast<double>(cm.column_sum(i));
  }
  pe /= n * n;
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

AccuracyReport accuracy_report(const ConfusionMatrix& cm) {
  AccuracyReport r;
  r.overall_accuracy = overall_accuracy(cm);
  r.kappa = kappa(cm);
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    const auto row = cm.row_sum(i);
    const auto col = cm.column_sum(i);
    r.producer_accuracy.push_back(row ? static_cast<double>(cm.at(i, i)) / static_cast<double>(row) : 0.0);
    r.user_accuracy.push_back(col ? static_cast<double>(cm.at(i, i)) / static_cast<double>(col) : 0.0);
  }
  return r;
}

double areal_extent(const Mask& m, double pixel_size_m) {
  if (!(pixel_size_m > 0.0)) throw PreconditionError("pixel size must be > 0");
  return static_cast<double>(m.count()) * pixel_size_m * pixel_size_m / 1e6;
}

ArealComparison compare_areas(std::string feature_name, double reference_km2, double extracted_km2) {
  if (!(reference_km2 >= 0.0) || !(extracted_km2 >= 0.0)) throw PreconditionError("areas must be >= 0");
  ArealComparison c{std::move(feature_name), reference_km2, extracted_km2, 0.0};
  if (reference_km2 > 0.0) {
    c.relative_error = std::abs(extracted_km2 - reference_km2) / reference_km2;
  } else if (extracted_km2 > 0.0) {
    c.relative_error = std::numeric_limits<double>::infinity();
  }
  return c;
}

namespace {

std::string printf_string(const char* fmt, auto... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string s(static_cast<std::size_t>(n), '\0');
  std::snprintf(s.data(), s.size() + 1, fmt, args...);
  return s;
}

}  // namespace

std::string format_report(std::span<const MethodReport> methods, std::span<const ArealComparison> areas) {
  std::string out;
  out += printf_string("%-24s %6s  %s\n", "Methodology", "Kappa", "Overall Accuracy (%)");
  out += printf_string("%-24s %6s  %s\n", "------------------------", "------", "--------------------");
  for (const auto& m : methods) {
    out += printf_string("%-24s %6.2f  %.2f\n", m.methodology.c_str(), m.accuracy.kappa,
                         100.0 * m.accuracy.overall_accuracy);
  }
  if (!areas.empty()) {
    out += "\n";
    out += printf_string("%-24s %20s  %18s  %14s\n", "Feature", "Reference Area (km2)", "Areal Extent (km2)",
                         "Relative Error");
    for (const auto& a : areas) {
      out += printf_string("%-24s %20.2f  %18.2f  %14.4f\n", a.feature_name.c_str(), a.reference_area_km2,
                           a.extracted_area_km2, a.relative_error);
    }
  }
  return out;
}

}  // namespace genn
