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

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "genn/error.hpp"
#include "genn/pipeline.hpp"

namespace genn {

namespace {

constexpr std::string_view kMagic = "GENN-BUNDLE\n";
constexpr std::string_view kChecksumKey = "checksum=";

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large inputs in chunks.
  while (!bytes.empty()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size(), 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), n);
    bytes.remove_prefix(n);
  }
  return static_cast<std::uint32_t>(crc);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number for " + what + ": '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_uint(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("bad integer for " + what + ": '" + std::string(s) + "'");
  }
  return v;
}

long parse_int(std::string_view s, const std::string& what) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("bad integer for " + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::string join_numbers(std::span<const double> values) {
  std::string out;
  for (double v : values) out += format_double(v) + "\n";
  return out;
}

std::vector<double> split_numbers(std::string_view payload, const std::string& what) {
  std::vector<double> out;
  while (!payload.empty()) {
    const auto nl = payload.find('\n');
    if (nl == std::string_view::npos) throw FormatError("unterminated number in section " + what);
    out.push_back(parse_double(payload.substr(0, nl), what));
    payload.remove_prefix(nl + 1);
  }
  return out;
}

class Writer {
 public:
  void field(const std::string& key, const std::string& value) { out_ += key + "=" + value + "\n"; }
  void section(const std::string& name, const std::string& payload) {
    out_ += "section " + name + " " + std::to_string(payload.size()) + "\n" + payload + "\n";
  }
  std::string finish() {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", crc32_of(out_));
    return out_ + std::string(kChecksumKey) + buf + "\n";
  }
  std::string& text() { return out_; }

 private:
  std::string out_;
};

// Cursor over the bundle text; reports truncation as a format error.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool done() const noexcept { return pos_ >= text_.size(); }
  bool starts_with(std::string_view prefix) const noexcept { return text_.substr(pos_).starts_with(prefix); }

  std::string_view line() {
    const auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) throw FormatError("truncated bundle: unterminated line");
    const auto out = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return out;
  }

  std::string_view bytes(std::size_t n) {
    if (text_.size() - pos_ < n) throw FormatError("truncated bundle: section shorter than declared");
    const auto out = text_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_bundle(const ModelBundle& b) {
  Writer w;
  w.text() += kMagic;
  w.field("format_version", std::to_string(b.format_version));
  w.field("class_name", b.class_name);
  w.field("window_size", std::to_string(b.window_size));
  w.field("glcm_levels", std::to_string(b.glcm.levels));
  w.field("glcm_dx", std::to_string(b.glcm.dx));
  w.field("glcm_dy", std::to_string(b.glcm.dy));
  w.field("glcm_symmetric", b.glcm.symmetric ? "1" : "0");
  const ExtractParams& p = b.params;
  w.field("stretch_low", format_double(p.stretch_low));
  w.field("stretch_high", format_double(p.stretch_high));
  w.field("use_canny", p.use_canny ? "1" : "0");
  w.field("canny_sigma", format_double(p.canny.sigma));
  w.field("canny_low", format_double(p.canny.low_thr));
  w.field("canny_high", format_double(p.canny.high_thr));
  w.field("use_opening", p.use_opening ? "1" : "0");
  w.field("opening_side", std::to_string(p.opening_side));
  w.field("accept_threshold", format_double(p.accept_threshold));
  w.field("bridge", p.bridge ? "1" : "0");
  w.field("bridge_max_gap", format_double(p.bridge_params.max_gap));
  w.field("bridge_degree", std::to_string(p.bridge_params.degree));
  w.field("bridge_context_len", std::to_string(p.bridge_params.context_len));
  std::string layers;
  for (auto s : b.network.layer_sizes()) layers += (layers.empty() ? "" : ",") + std::to_string(s);
  w.field("layers", layers);
  w.field("som_rows", std::to_string(b.som ? b.som->rows() : 0));
  w.field("som_cols", std::to_string(b.som ? b.som->cols() : 0));
  w.field("som_trained", b.som && b.som->trained() ? "1" : "0");

  w.section("haralick_mean", join_numbers(b.haralick_mean));
  w.section("haralick_std", join_numbers(b.haralick_std));
  for (std::size_t l = 0; l < b.network.depth(); ++l) {
    w.section("weights_" + std::to_string(l), join_numbers(b.network.weights(l)));
    w.section("biases_" + std::to_string(l), join_numbers(b.network.biases(l)));
  }
  if (b.som) w.section("som_codebook", join_numbers(b.som->codebook()));
  w.section("rules", b.rules_text);
  return w.finish();
}

ModelBundle parse_bundle(const std::string& bytes) {
  if (!std::string_view(bytes).starts_with(kMagic)) throw FormatError("not a model bundle (bad magic)");
  Reader in(std::string_view(bytes).substr(kMagic.size()));

  const std::string_view version_line = in.line();
  if (!version_line.starts_with("format_version=")) throw FormatError("bundle header must start with format_version");
  const auto version = parse_uint(version_line.substr(15), "format_version");
  if (version > kBundleFormatVersion) {
    throw VersionError("bundle format version " + std::to_string(version) + " is newer than supported version " +
                       std::to_string(kBundleFormatVersion));
  }
  if (version == 0) throw VersionError("bundle format version 0 is not valid");

  const auto mark = bytes.rfind(kChecksumKey);
  if (mark == std::string::npos || (mark > 0 && bytes[mark - 1] != '\n')) {
    throw FormatError("truncated bundle: checksum line missing");
  }
  const std::string_view tail = std::string_view(bytes).substr(mark + kChecksumKey.size());
  if (tail.size() != 9 || tail.back() != '\n') throw FormatError("truncated bundle: malformed checksum line");
  std::uint32_t stored = 0;
  const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + 8, stored, 16);
  if (ec != std::errc() || ptr != tail.data() + 8) throw FormatError("malformed checksum value");
  const std::uint32_t actual = crc32_of(std::string_view(bytes).substr(0, mark));
  if (stored != actual) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "checksum mismatch: stored %08x, computed %08x", stored, actual);
    throw ChecksumError(buf);
  }

  Reader body(std::string_view(bytes).substr(kMagic.size(), mark - kMagic.size()));
  body.line();
  std::map<std::string, std::string, std::less<>> fields;
  while (!body.done() && !body.starts_with("section ")) {
    const auto l = body.line();
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw FormatError("malformed header line '" + std::string(l) + "'");
    fields[std::string(l.substr(0, eq))] = std::string(l.substr(eq + 1));
  }
  std::map<std::string, std::string, std::less<>> sections;
  while (!body.done()) {
    const auto l = body.line();
    std::istringstream header{std::string(l)};
    std::string kw, name;
    std::size_t len = 0;
    if (!(header >> kw >> name >> len) || kw != "section") throw FormatError("malformed section line '" + std::string(l) + "'");
    sections[name] = std::string(body.bytes(len));
    if (body.bytes(1) != "\n") throw FormatError("section " + name + " not terminated");
  }

  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw FormatError("bundle header lacks '" + key + "'");
    return it->second;
  };
  auto section = [&](const std::string& key) -> const std::string& {
    const auto it = sections.find(key);
    if (it == sections.end()) throw FormatError("bundle lacks section '" + key + "'");
    return it->second;
  };
  auto flag = [&](const std::string& key) {
    const auto& v = get(key);
    if (v != "0" && v != "1") throw FormatError("bad flag for " + key + ": '" + v + "'");
    return v == "1";
  };

  ModelBundle b;
  b.format_version = static_cast<std::uint32_t>(version);
  b.class_name = get("class_name");
  b.window_size = parse_uint(get("window_size"), "window_size");
  b.glcm.levels = parse_uint(get("glcm_levels"), "glcm_levels");
  b.glcm.dx = static_cast<int>(parse_int(get("glcm_dx"), "glcm_dx"));
  b.glcm.dy = static_cast<int>(parse_int(get("glcm_dy"), "glcm_dy"));
  b.glcm.symmetric = flag("glcm_symmetric");
  ExtractParams& p = b.params;
  p.stretch_low = parse_double(get("stretch_low"), "stretch_low");
  p.stretch_high = parse_double(get("stretch_high"), "stretch_high");
  p.use_canny = flag("use_canny");
  p.canny.sigma = parse_double(get("canny_sigma"), "canny_sigma");
  p.canny.low_thr = parse_double(get("canny_low"), "canny_low");
  p.canny.high_thr = parse_double(get("canny_high"), "canny_high");
  p.use_opening = flag("use_opening");
  p.opening_side = parse_uint(get("opening_side"), "opening_side");
  p.accept_threshold = parse_double(get("accept_threshold"), "accept_threshold");
  p.bridge = flag("bridge");
  p.bridge_params.max_gap = parse_double(get("bridge_max_gap"), "bridge_max_gap");
  p.bridge_params.degree = static_cast<int>(parse_int(get("bridge_degree"), "bridge_degree"));
  p.bridge_params.context_len = parse_uint(get("bridge_context_len"), "bridge_context_len");
  if (b.window_size < 3 || b.window_size % 2 == 0) throw FormatError("bundle window size must be odd and >= 3");

  auto fill = [&](auto&& dst, const std::string& name) {
    const auto values = split_numbers(section(name), name);
    if (values.size() != dst.size()) {
      throw FormatError("section " + name + " holds " + std::to_string(values.size()) + " values, expected " +
                        std::to_string(dst.size()));
    }
    std::copy(values.begin(), values.end(), dst.begin());
  };
  fill(b.haralick_mean, "haralick_mean");
  fill(b.haralick_std, "haralick_std");
  for (double sd : b.haralick_std) {
    if (!(sd > 0.0)) throw FormatError("bundle standardization std must be > 0");
  }

  std::vector<std::size_t> layers;
  std::string_view spec = get("layers");
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    layers.push_back(parse_uint(spec.substr(0, comma), "layers"));
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
  }
  b.network = MlpNetwork(layers);
  if (b.network.input_size() != b.window_size * b.window_size + HaralickVector::kCount || b.network.output_size() != 2) {
    throw FormatError("network shape does not match the window size");
  }
  for (std::size_t l = 0; l < b.network.depth(); ++l) {
    fill(b.network.weights(l), "weights_" + std::to_string(l));
    fill(b.network.biases(l), "biases_" + std::to_string(l));
  }

  const auto rows = parse_uint(get("som_rows"), "som_rows");
  const auto cols = parse_uint(get("som_cols"), "som_cols");
  if (rows > 0 && cols > 0) {
    auto codebook = split_numbers(section("som_codebook"), "som_codebook");
    const std::size_t dim = b.network.input_size();
    if (codebook.size() != rows * cols * dim) throw FormatError("som_codebook size does not match the grid");
    b.som = SomGrid(rows, cols, dim, std::move(codebook), flag("som_trained"));
  }
  b.rules_text = section("rules");
  return b;
}

void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  const std::string bytes = serialize_bundle(b);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_bundle(bytes);
}

}  // namespace genn
