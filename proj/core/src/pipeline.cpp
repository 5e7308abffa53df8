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

#include "genn/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "genn/error.hpp"

namespace genn {

namespace {

std::vector<double> raw_haralick(const LevelGrid& grid, const Window& w, const GlcmConfig& cfg) {
  const auto a = haralick_features(compute_glcm(grid, w, cfg)).to_array();
  return {a.begin(), a.end()};
}

void check_exemplars(const std::vector<Raster>& set, const char* what, std::size_t size) {
  if (set.empty()) throw PreconditionError(std::string("no ") + what + " exemplars");
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k].width() < size || set[k].height() < size) {
      throw PreconditionError(std::string(what) + " exemplar " + std::to_string(k) + " is " +
                              std::to_string(set[k].width()) + "x" + std::to_string(set[k].height()) +
                              ", smaller than the " + std::to_string(size) + " px window");
    }
  }
}

struct Sample {
  std::vector<double> pixels;
  std::vector<double> haralick;
};

void sample_windows(const Raster& r, std::size_t size, const GlcmConfig& glcm, std::vector<Sample>& out) {
  const LevelGrid grid = quantize(r, glcm.levels);
  const std::size_t stride = std::max<std::size_t>(1, size / 2);
  for (std::size_t y0 = 0; y0 + size <= r.height(); y0 += stride) {
    for (std::size_t x0 = 0; x0 + size <= r.width(); x0 += stride) {
      const Window w{x0, y0, size};
      out.push_back({flatten_window(r, w), raw_haralick(grid, w, glcm)});
    }
  }
}

// Runs body(y) for every row, spreading rows over worker threads. Each row is
// handled by exactly one call, so per-row output slots need no locking.
template <typename Body>
void for_each_row(std::size_t rows, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows));
  if (threads <= 1) {
    for (std::size_t y = 0; y < rows; ++y) body(y);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t y = next++; y < rows; y = next++) body(y);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = rows;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t nearest_pixel(const ObjectRecord& o) {
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t k = 0; k < o.pixels.size(); ++k) {
    const double dx = o.pixels[k].x - o.centroid_x;
    const double dy = o.pixels[k].y - o.centroid_y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

std::vector<double> ModelBundle::feature_vector(const Raster& r, const LevelGrid& grid, const Window& w) const {
  std::vector<double> v = flatten_window(r, w);
  const auto h = haralick_features(compute_glcm(grid, w, glcm)).to_array();
  for (std::size_t k = 0; k < h.size(); ++k) v.push_back((h[k] - haralick_mean[k]) / haralick_std[k]);
  return v;
}

ModelBundle train_pipeline(const std::vector<Raster>& positives, const std::vector<Raster>& negatives,
                           const std::string& class_name, const TrainParams& params) {
  const std::size_t size = params.window_size;
  if (size < 3 || size % 2 == 0) throw PreconditionError("window size must be odd and >= 3");
  if (class_name.empty() || class_name.find_first_of("\r\n") != std::string::npos) {
    throw PreconditionError("class name must be a non-empty single line");
  }
  if (params.hidden == 0) throw PreconditionError("hidden layer size must be >= 1");
  check_exemplars(positives, "positive", size);
  check_exemplars(negatives, "negative", size);
  if (!params.rules_text.empty()) parse_rules(params.rules_text);

  std::vector<Sample> pos;
  std::vector<Sample> neg;
  for (const auto& r : positives) sample_windows(r, size, params.glcm, pos);
  for (const auto& r : negatives) sample_windows(r, size, params.glcm, neg);

  ModelBundle b;
  b.class_name = class_name;
  b.window_size = size;
  b.glcm = params.glcm;
  b.rules_text = params.rules_text;
  b.params = params.extract;

  const double n = static_cast<double>(pos.size() + neg.size());
  for (std::size_t k = 0; k < HaralickVector::kCount; ++k) {
    double sum = 0.0;
    for (const auto* set : {&pos, &neg}) {
      for (const auto& s : *set) sum += s.haralick[k];
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto* set : {&pos, &neg}) {
      for (const auto& s : *set) ss += (s.haralick[k] - mean) * (s.haralick[k] - mean);
    }
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw PreconditionError(std::string("Haralick feature '") + HaralickVector::names()[k] +
                              "' is constant over the training windows");
    }
    b.haralick_mean[k] = mean;
    b.haralick_std[k] = sd;
  }

  const std::size_t dim = size * size + HaralickVector::kCount;
  TrainingSet data(dim, 2);
  std::vector<std::vector<double>> positive_vectors;
  auto vectorize = [&](const Sample& s) {
    std::vector<double> v = s.pixels;
    for (std::size_t k = 0; k < HaralickVector::kCount; ++k) {
      v.push_back((s.haralick[k] - b.haralick_mean[k]) / b.haralick_std[k]);
    }
    return v;
  };
  for (const auto& s : pos) {
    auto v = vectorize(s);
    positive_vectors.push_back(v);
    data.add_one_hot(std::move(v), 0);
  }
  for (const auto& s : neg) data.add_one_hot(vectorize(s), 1);

  const MlpNetwork init = init_network({dim, params.hidden, 2}, params.nn.seed);
  b.network = train_backprop(init, data, params.nn).network;

  if (params.som_rows > 0 && params.som_cols > 0) {
    b.som = train_som(positive_vectors, params.som_rows, params.som_cols, params.som);
  }
  return b;
}

ExtractionResult extract(const Raster& r, const ModelBundle& b, const ExtractOptions& options) {
  if (b.format_version > kBundleFormatVersion) {
    throw VersionError("bundle format version " + std::to_string(b.format_version) +
                       " is newer than supported version " + std::to_string(kBundleFormatVersion));
  }
  const std::size_t size = b.window_size;
  if (r.width() < size || r.height() < size) {
    throw PreconditionError("raster " + std::to_string(r.width()) + "x" + std::to_string(r.height()) +
                            " is smaller than the " + std::to_string(size) + " px window");
  }
  const ExtractParams& p = b.params;
  const RuleSet rules = options.rules ? *options.rules : parse_rules(b.rules_text);

  const Raster stretched = histogram_stretch(r, p.stretch_low, p.stretch_high);
  const LevelGrid grid = quantize(stretched, b.glcm.levels);
  const std::size_t w = r.width();
  const std::size_t h = r.height();

  std::vector<std::uint8_t> accepted(w * h, 0);
  std::vector<double> feature_prob(w * h, 0.0);
  for_each_row(h, options.threads, [&](std::size_t y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto v = b.feature_vector(stretched, grid, Window::centered_clamped(x, y, size, w, h));
      const auto out = forward(b.network, v);
      const Classification c = classify_output(out);
      feature_prob[y * w + x] = out[0];
      accepted[y * w + x] = c.class_index == 0 && c.confidence >= p.accept_threshold;
    }
  });

  ExtractionResult result;
  result.rejected_count = static_cast<std::size_t>(std::count(accepted.begin(), accepted.end(), 0));
  Mask mask(w, h, std::move(accepted));
  if (p.use_canny) {
    const Mask edges = canny(stretched, p.canny);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        if (edges.test(x, y)) mask.set(x, y, false);
      }
    }
  }
  if (p.use_opening) mask = open(mask, StructuringElement::square(p.opening_side));

  auto objects = connected_components(mask, 8);
  fill_mean_intensity(objects, r);
  for (auto& o : objects) {
    double prob = 0.0;
    for (const auto& px : o.pixels) prob += feature_prob[static_cast<std::size_t>(px.y) * w + static_cast<std::size_t>(px.x)];
    prob /= static_cast<double>(o.pixels.size());

    long cell = -1;
    if (b.som) {
      const Pixel c = o.pixels[nearest_pixel(o)];
      const auto v = b.feature_vector(
          stretched, grid,
          Window::centered_clamped(static_cast<std::size_t>(c.x), static_cast<std::size_t>(c.y), size, w, h));
      cell = static_cast<long>(best_matching_unit(*b.som, v).index(b.som->cols()));
    }

    AttributeSet attrs;
    attrs.set(Attribute::area, static_cast<double>(o.area));
    attrs.set(Attribute::perimeter, static_cast<double>(o.perimeter));
    attrs.set(Attribute::width, o.width);
    attrs.set(Attribute::elongation, o.elongation);
    attrs.set(Attribute::compactness, o.compactness);
    attrs.set(Attribute::mean_intensity, o.mean_intensity);
    attrs.set(Attribute::class_prob, prob);
    attrs.set(Attribute::som_cell, static_cast<double>(cell));

    const auto decision = evaluate_rules(rules, attrs);
    ExtractedObject e{std::move(o), kNnOnlyLabel, kNnOnlyLabel, cell};
    if (decision) {
      e.label = decision->label;
      e.rule_name = decision->rule_name;
    }
    if (e.label == kRejectLabel) {
      for (const auto& px : e.record.pixels) {
        mask.set(static_cast<std::size_t>(px.x), static_cast<std::size_t>(px.y), false);
      }
      result.rule_rejected.push_back(std::move(e));
    } else {
      result.objects.push_back(std::move(e));
    }
  }

  if (p.bridge) mask = bridge_gaps(mask, p.bridge_params);
  result.mask = std::move(mask);
  return result;
}

}  // namespace genn
