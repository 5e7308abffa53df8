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

#include "genn/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <optional>
#include <tuple>

#include "genn/error.hpp"
#include "genn/preprocess.hpp"

namespace genn {

namespace {

constexpr std::array<std::array<int, 2>, 4> kN4 = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<std::array<int, 2>, 8> kN8 = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

}  // namespace

std::vector<int> label_components(const Mask& m, int connectivity, std::size_t* count) {
  if (connectivity != 4 && connectivity != 8) throw PreconditionError("connectivity must be 4 or 8");
  const int w = static_cast<int>(m.width());
  const int h = static_cast<int>(m.height());
  std::vector<int> labels(m.size(), -1);
  int next = 0;
  std::deque<Pixel> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y * w + x);
      if (!m.bits()[i] || labels[i] >= 0) continue;
      labels[i] = next;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const Pixel p = queue.front();
        queue.pop_front();
        for (int k = 0; k < connectivity; ++k) {
          const int nx = p.x + kN8[static_cast<std::size_t>(k)][0];
          const int ny = p.y + kN8[static_cast<std::size_t>(k)][1];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const auto j = static_cast<std::size_t>(ny * w + nx);
          if (m.bits()[j] && labels[j] < 0) {
            labels[j] = next;
            queue.push_back({nx, ny});
          }
        }
      }
      ++next;
    }
  }
  if (count != nullptr) *count = static_cast<std::size_t>(next);
  return labels;
}

std::vector<ObjectRecord> connected_components(const Mask& m, int connectivity) {
  std::size_t n = 0;
  const auto labels = label_components(m, connectivity, &n);
  const int w = static_cast<int>(m.width());
  const int h = static_cast<int>(m.height());
  std::vector<ObjectRecord> objects(n);
  for (std::size_t k = 0; k < n; ++k) {
    objects[k].id = k;
    objects[k].bbox = BoundingBox{w, h, -1, -1};
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = labels[static_cast<std::size_t>(y * w + x)];
      if (l < 0) continue;
      auto& o = objects[static_cast<std::size_t>(l)];
      o.pixels.push_back({x, y});
      o.bbox.x0 = std::min(o.bbox.x0, x);
      o.bbox.y0 = std::min(o.bbox.y0, y);
      o.bbox.x1 = std::max(o.bbox.x1, x);
      o.bbox.y1 = std::max(o.bbox.y1, y);
      bool border = false;
      for (const auto& d : kN4) border = border || !m.test_signed(x + d[0], y + d[1]);
      if (border) ++o.perimeter;
    }
  }

  const Mask skel = skeleton(m);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y * w + x);
      if (skel.bits()[i] && labels[i] >= 0) ++objects[static_cast<std::size_t>(labels[i])].skeleton_length;
    }
  }

  for (auto& o : objects) {
    o.area = o.pixels.size();
    const double n_px = static_cast<double>(o.area);
    double sx = 0.0, sy = 0.0;
    for (const auto& p : o.pixels) {
      sx += p.x;
      sy += p.y;
    }
    o.centroid_x = sx / n_px;
    o.centroid_y = sy / n_px;
    double mxx = 0.0, myy = 0.0, mxy = 0.0;
    for (const auto& p : o.pixels) {
      const double dx = p.x - o.centroid_x;
      const double dy = p.y - o.centroid_y;
      mxx += dx * dx;
      myy += dy * dy;
      mxy += dx * dy;
    }
    mxx = mxx / n_px + 1.0 / 12.0;
    myy = myy / n_px + 1.0 / 12.0;
    mxy /= n_px;
    const double mean = 0.5 * (mxx + myy);
    const double spread = std::sqrt(0.25 * (mxx - myy) * (mxx - myy) + mxy * mxy);
    const double major = mean + spread;
    const double minor = std::max(mean - spread, 1e-12);
    o.elongation = std::max(1.0, std::sqrt(major / minor));
    o.skeleton_length = std::max<std::size_t>(o.skeleton_length, 1);
    o.width = n_px / static_cast<double>(o.skeleton_length);
    const double per = static_cast<double>(o.perimeter);
    o.compactness = std::min(1.0, 4.0 * std::numbers::pi * n_px / (per * per));
  }
  return objects;
}

void fill_mean_intensity(std::vector<ObjectRecord>& objects, const Raster& source) {
  for (auto& o : objects) {
    double acc = 0.0;
    for (const auto& p : o.pixels) {
      if (static_cast<std::size_t>(p.x) >= source.width() || static_cast<std::size_t>(p.y) >= source.height()) {
        throw DimensionError("object pixel outside the source raster");
      }
      acc += source.at(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y));
    }
    o.mean_intensity = o.pixels.empty() ? 0.0 : acc / static_cast<double>(o.pixels.size());
  }
}

namespace {

// P2..P9 around (x, y), clockwise from north.
std::array<int, 8> neighborhood(const std::vector<std::uint8_t>& img, int w, int h, int x, int y) {
  auto at = [&](int px, int py) -> int {
    if (px < 0 || py < 0 || px >= w || py >= h) return 0;
    return img[static_cast<std::size_t>(py * w + px)];
  };
  return {at(x, y - 1), at(x + 1, y - 1), at(x + 1, y), at(x + 1, y + 1),
          at(x, y + 1), at(x - 1, y + 1), at(x - 1, y), at(x - 1, y - 1)};
}

bool deletable(const std::vector<std::uint8_t>& img, int w, int h, int x, int y, int pass) {
  const auto p = neighborhood(img, w, h, x, y);
  const int b = std::accumulate(p.begin(), p.end(), 0);
  if (b < 2 || b > 6) return false;
  int a = 0;
  for (int k = 0; k < 8; ++k) a += (p[static_cast<std::size_t>(k)] == 0 && p[static_cast<std::size_t>((k + 1) % 8)] == 1) ? 1 : 0;
  if (a != 1) return false;
  const int n = p[0], e = p[2], s = p[4], wv = p[6];
  if (pass == 0) return n * e * s == 0 && e * s * wv == 0;
  return n * e * wv == 0 && n * s * wv == 0;
}

}  // namespace

Mask skeleton(const Mask& m) {
  const int w = static_cast<int>(m.width());
  const int h = static_cast<int>(m.height());
  std::vector<std::uint8_t> img = m.bits();
  std::vector<std::size_t> flagged;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      flagged.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (img[static_cast<std::size_t>(y * w + x)] && deletable(img, w, h, x, y, pass)) {
            flagged.push_back(static_cast<std::size_t>(y * w + x));
          }
        }
      }
      for (std::size_t i : flagged) {
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        if (deletable(img, w, h, x, y, pass)) {
          img[i] = 0;
          changed = true;
        }
      }
    }
  }
  return Mask(m.width(), m.height(), std::move(img));
}

std::vector<Pixel> endpoints(const Mask& skel) {
  std::vector<Pixel> out;
  const int w = static_cast<int>(skel.width());
  const int h = static_cast<int>(skel.height());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!skel.test(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) continue;
      int n = 0;
      for (const auto& d : kN8) n += skel.test_signed(x + d[0], y + d[1]) ? 1 : 0;
      if (n == 1) out.push_back({x, y});
    }
  }
  return out;
}

double CurveModel::evaluate(double t) const noexcept {
  double acc = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) acc = acc * t + coefficients[k];
  return acc;
}

CurveModel fit_curve(std::span<const PointD> points, int degree, CurveAxis axis) {
  if (degree < 1 || degree > 3) throw PreconditionError("curve degree must be 1..3");
  const std::size_t n = static_cast<std::size_t>(degree) + 1;
  if (points.size() < n) throw PreconditionError("curve fit underdetermined: need at least degree + 1 points");

  auto param = [&](const PointD& p) { return axis == CurveAxis::x_param ? p.x : p.y; };
  auto value = [&](const PointD& p) { return axis == CurveAxis::x_param ? p.y : p.x; };

  double center = 0.0;
  for (const auto& p : points) center += param(p);
  center /= static_cast<double>(points.size());
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, std::abs(param(p) - center));
  if (scale == 0.0) throw PreconditionError("curve fit singular: all points share the parameter coordinate");

  // Normal equations in u = (t - center) / scale.
  std::vector<double> a(n * n, 0.0), rhs(n, 0.0);
  std::vector<double> powers(2 * n - 1);
  for (const auto& p : points) {
    const double u = (param(p) - center) / scale;
    powers[0] = 1.0;
    for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * u;
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] += powers[i] * value(p);
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] += powers[i + j];
    }
  }
  double diag_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) diag_max = std::max(diag_max, std::abs(a[i * n + i]));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (std::abs(a[pivot * n + col]) <= 1e-12 * diag_max) throw PreconditionError("curve fit singular system");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> cu(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i * n + j] * cu[j];
    cu[i] = acc / a[i * n + i];
  }

  double sq = 0.0;
  for (const auto& p : points) {
    const double u = (param(p) - center) / scale;
    double fit = 0.0;
    for (std::size_t k = n; k-- > 0;) fit = fit * u + cu[k];
    const double r = value(p) - fit;
    sq += r * r;
  }

  // Expand sum cu_k ((t - c) / s)^k into powers of t.
  CurveModel model;
  model.degree = degree;
  model.axis = axis;
  model.coefficients.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double ck = cu[k] / std::pow(scale, static_cast<double>(k));
    double binom = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j > 0) binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      model.coefficients[j] += ck * binom * std::pow(-center, static_cast<double>(k - j));
    }
  }
  model.rms_residual = std::sqrt(sq / static_cast<double>(points.size()));
  return model;
}

CurveModel fit_curve(std::span<const PointD> points, int degree) {
  std::optional<CurveModel> by_x, by_y;
  std::optional<PreconditionError> first_error;
  try {
    by_x = fit_curve(points, degree, CurveAxis::x_param);
  } catch (const PreconditionError& e) {
    first_error = e;
  }
  try {
    by_y = fit_curve(points, degree, CurveAxis::y_param);
  } catch (const PreconditionError& e) {
    if (!first_error) first_error = e;
  }
  if (by_x && by_y) return by_y->rms_residual < by_x->rms_residual - 1e-12 ? *by_y : *by_x;
  if (by_x) return *by_x;
  if (by_y) return *by_y;
  throw *first_error;
}

std::vector<Pixel> line_pixels(Pixel a, Pixel b) {
  std::vector<Pixel> out;
  int x = a.x, y = a.y;
  const int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  while (true) {
    out.push_back({x, y});
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
  return out;
}

namespace {

// Up to `len` skeleton pixels reached by walking away from `start`.
std::vector<Pixel> trail(const Mask& skel, Pixel start, std::size_t len) {
  std::vector<Pixel> out{start};
  Pixel cur = start;
  while (out.size() < len) {
    bool moved = false;
    for (const auto& d : kN8) {
      const Pixel nb{cur.x + d[0], cur.y + d[1]};
      if (!skel.test_signed(nb.x, nb.y)) continue;
      if (std::find(out.begin(), out.end(), nb) != out.end()) continue;
      out.push_back(nb);
      cur = nb;
      moved = true;
      break;
    }
    if (!moved) break;
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<Pixel> bridge_path(const Mask& skel, Pixel a, Pixel b, const BridgeParams& params) {
  std::vector<PointD> pts;
  for (const auto& p : trail(skel, a, params.context_len)) pts.push_back({double(p.x), double(p.y)});
  for (const auto& p : trail(skel, b, params.context_len)) pts.push_back({double(p.x), double(p.y)});

  std::optional<CurveModel> model;
  for (int deg = params.degree; deg >= 1 && !model; --deg) {
    try {
      model = fit_curve(pts, deg);
    } catch (const PreconditionError&) {
    }
  }
  if (!model) return line_pixels(a, b);

  const bool by_x = model->axis == CurveAxis::x_param;
  const int ta = by_x ? a.x : a.y;
  const int tb = by_x ? b.x : b.y;
  if (ta == tb) return line_pixels(a, b);
  const double va = by_x ? a.y : a.x;
  const double vb = by_x ? b.y : b.x;
  const double off_a = va - model->evaluate(ta);
  const double off_b = vb - model->evaluate(tb);

  std::vector<Pixel> samples;
  const int step = tb > ta ? 1 : -1;
  const double chord = std::hypot(double(b.x - a.x), double(b.y - a.y));
  for (int t = ta;; t += step) {
    const double s = double(t - ta) / double(tb - ta);
    const double v = model->evaluate(t) + (1.0 - s) * off_a + s * off_b;
    // A curve that strays far from the chord is not trusted.
    const double straight = va + s * (vb - va);
    if (std::abs(v - straight) > std::max(2.0, chord)) return line_pixels(a, b);
    const int vi = static_cast<int>(std::lround(v));
    samples.push_back(by_x ? Pixel{t, vi} : Pixel{vi, t});
    if (t == tb) break;
  }
  samples.front() = a;
  samples.back() = b;
  std::vector<Pixel> path;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    auto seg = line_pixels(samples[i], samples[i + 1]);
    path.insert(path.end(), seg.begin(), seg.end() - 1);
  }
  path.push_back(b);
  return path;
}

}  // namespace

Mask bridge_gaps(const Mask& m, const BridgeParams& params) {
  if (!(params.max_gap >= 1.0)) throw PreconditionError("bridge_gaps: max_gap must be >= 1");
  if (params.degree < 1 || params.degree > 3) throw PreconditionError("bridge_gaps: degree must be 1..3");
  std::size_t n = 0;
  const auto labels = label_components(m, 8, &n);
  if (n < 2) return m;
  const int w = static_cast<int>(m.width());
  const int h = static_cast<int>(m.height());
  const Mask skel = skeleton(m);
  const auto ends = endpoints(skel);

  std::vector<std::size_t> area(n, 0), skel_len(n, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    ++area[static_cast<std::size_t>(labels[i])];
    if (skel.bits()[i]) ++skel_len[static_cast<std::size_t>(labels[i])];
  }
  auto label_of = [&](Pixel p) { return static_cast<std::size_t>(labels[static_cast<std::size_t>(p.y * w + p.x)]); };
  auto width_of = [&](std::size_t l) {
    return static_cast<double>(area[l]) / static_cast<double>(std::max<std::size_t>(skel_len[l], 1));
  };

  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      if (label_of(ends[i]) == label_of(ends[j])) continue;
      const double d = std::hypot(double(ends[i].x - ends[j].x), double(ends[i].y - ends[j].y));
      if (d <= params.max_gap) pairs.emplace_back(d, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  Mask out = m;
  UnionFind groups(n);
  std::vector<bool> used(ends.size(), false);
  for (const auto& [d, i, j] : pairs) {
    if (used[i] || used[j]) continue;
    const std::size_t la = label_of(ends[i]);
    const std::size_t lb = label_of(ends[j]);
    if (groups.find(la) == groups.find(lb)) continue;
    used[i] = used[j] = true;
    groups.unite(la, lb);

    const double ribbon = 0.5 * (width_of(la) + width_of(lb));
    const int radius = std::clamp(static_cast<int>(std::lround((ribbon - 1.0) / 2.0)), 0,
                                  static_cast<int>(params.max_gap));
    Mask path(m.width(), m.height());
    for (const auto& p : bridge_path(skel, ends[i], ends[j], params)) {
      if (p.x >= 0 && p.y >= 0 && p.x < w && p.y < h) path.set(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y));
    }
    const Mask widened = dilate(path, StructuringElement::square(static_cast<std::size_t>(2 * radius + 1)));
    std::vector<std::uint8_t> bits = out.bits();
    for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = bits[k] | widened.bits()[k];
    out = Mask(m.width(), m.height(), std::move(bits));
  }
  return out;
}

}  // namespace genn
