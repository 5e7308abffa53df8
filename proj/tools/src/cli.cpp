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

#include "genn/tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>

#include "genn/error.hpp"
#include "genn/eval.hpp"
#include "genn/geometry.hpp"
#include "genn/pipeline.hpp"
#include "genn/tools/scene.hpp"

namespace genn::tools {

namespace fs = std::filesystem;

namespace {

std::vector<Raster> load_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Raster> out;
  for (const auto& f : files) out.push_back(load_raster(f));
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string patch_name(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu.pgm", k);
  return buf;
}

struct SynthArgs {
  std::string spec;
  std::string out_dir;
};

void run_synth(const SynthArgs& a, std::ostream& out) {
  const SceneSpec spec = load_scene_spec(a.spec);
  const Scene scene = generate_scene(spec);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  save_raster(scene.raster, dir / "scene.pgm");
  save_mask(scene.shadow, dir / "shadow.pgm");
  for (const auto& [kind, mask] : scene.truth) save_mask(mask, dir / ("truth_" + kind + ".pgm"));
  out << "wrote " << (dir / "scene.pgm").string() << " and " << scene.truth.size() << " truth masks\n";

  if (spec.patch_window == 0 || spec.patch_count == 0) return;
  const Raster stretched = histogram_stretch(scene.raster, 0.01, 0.99);
  std::uint64_t salt = 1;
  const Mask none(scene.shadow.width(), scene.shadow.height());
  for (const auto& [kind, mask] : scene.truth) {
    // Shadowed pixels do not look like the feature; they serve as negatives.
    Mask visible = mask;
    for (std::size_t i = 0; i < visible.size(); ++i) {
      if (scene.shadow.bits()[i]) visible.set(i % visible.width(), i / visible.width(), false);
    }
    const PatchSet p = sample_patches(stretched, visible, none, spec.patch_window, spec.patch_count,
                                      spec.seed + 0x9E3779B97F4A7C15ULL * salt++);
    const fs::path pos = dir / "patches" / kind / "pos";
    const fs::path neg = dir / "patches" / kind / "neg";
    fs::create_directories(pos);
    fs::create_directories(neg);
    for (std::size_t k = 0; k < p.positives.size(); ++k) save_raster(p.positives[k], pos / patch_name(k));
    for (std::size_t k = 0; k < p.negatives.size(); ++k) save_raster(p.negatives[k], neg / patch_name(k));
    out << "wrote " << p.positives.size() << "+" << p.negatives.size() << " patches for " << kind << "\n";
  }
}

struct TrainArgs {
  std::string class_name;
  std::string positives;
  std::string negatives;
  std::size_t window = 9;
  std::string out;
  double lr = 0.1;
  std::size_t epochs = 100;
  std::uint64_t seed = 1;
  std::string som;
  std::size_t hidden = 16;
  std::size_t levels = 8;
  std::string rules;
  bool canny = false;
  bool no_opening = false;
  double threshold = 0.5;
  double bridge_gap = 0.0;
};

void run_train(const TrainArgs& a, std::ostream& out) {
  TrainParams p;
  p.window_size = a.window;
  p.glcm.levels = a.levels;
  p.hidden = a.hidden;
  p.nn.learning_rate = a.lr;
  p.nn.max_epochs = a.epochs;
  p.nn.seed = a.seed;
  p.som.seed = a.seed;
  if (!a.som.empty()) {
    const auto x = a.som.find('x');
    std::size_t rows = 0, cols = 0;
    if (x == std::string::npos || std::sscanf(a.som.c_str(), "%zux%zu", &rows, &cols) != 2 || rows == 0 || cols == 0) {
      throw PreconditionError("--som expects ROWSxCOLS, got '" + a.som + "'");
    }
    p.som_rows = rows;
    p.som_cols = cols;
  }
  if (!a.rules.empty()) p.rules_text = read_text(a.rules);
  p.extract.use_canny = a.canny;
  p.extract.use_opening = !a.no_opening;
  p.extract.accept_threshold = a.threshold;
  if (a.bridge_gap > 0.0) {
    p.extract.bridge = true;
    p.extract.bridge_params.max_gap = a.bridge_gap;
  }
  const ModelBundle b = train_pipeline(load_dir(a.positives), load_dir(a.negatives), a.class_name, p);
  save_bundle(b, a.out);
  out << "trained " << a.class_name << " bundle (" << b.network.parameter_count() << " parameters) -> " << a.out
      << "\n";
}

struct ExtractArgs {
  std::string bundle;
  std::string input;
  std::string rules;
  std::string out_mask;
  double bridge_gap = -1.0;
  double threshold = -1.0;
  std::string overlay;
  unsigned threads = 0;
};

void run_extract(const ExtractArgs& a, std::ostream& out) {
  ModelBundle b = load_bundle(a.bundle);
  if (a.threshold >= 0.0) b.params.accept_threshold = a.threshold;
  if (a.bridge_gap == 0.0) b.params.bridge = false;
  if (a.bridge_gap > 0.0) {
    b.params.bridge = true;
    b.params.bridge_params.max_gap = a.bridge_gap;
  }
  ExtractOptions opts;
  opts.threads = a.threads;
  opts.rules = load_rules(a.rules);
  const Raster input = load_raster(a.input);
  const ExtractionResult r = extract(input, b, opts);
  save_mask(r.mask, a.out_mask);
  if (!a.overlay.empty()) {
    Raster overlay = histogram_stretch(input, b.params.stretch_low, b.params.stretch_high);
    for (std::size_t i = 0; i < overlay.size(); ++i) {
      if (r.mask.bits()[i]) overlay.values()[i] = 255;
    }
    save_raster(overlay, a.overlay);
  }
  out << "foreground " << r.mask.count() << " px in " << connected_components(r.mask).size() << " components, "
      << r.objects.size() << " objects, " << r.rule_rejected.size()
      << " rejected by rules, " << r.rejected_count << " windows rejected\n";
  for (const auto& o : r.objects) {
    out << "object " << o.record.id << " label=" << o.label << " rule=" << o.rule_name << " area=" << o.record.area
        << " elongation=" << o.record.elongation << " width=" << o.record.width << " som_cell=" << o.som_cell << "\n";
  }
}

struct EvalArgs {
  std::string pred;
  std::string truth;
  double pixel_size = 0.0;
  std::string report;
  std::string method = "NN Approach";
  std::string feature = "feature";
};

void run_eval(const EvalArgs& a, std::ostream& out) {
  const Mask pred = load_mask(a.pred);
  const Mask truth = load_mask(a.truth);
  const ConfusionMatrix cm = confusion_matrix(pred, truth);
  const std::vector<MethodReport> methods{{a.method, accuracy_report(cm)}};
  std::vector<ArealComparison> areas;
  if (a.pixel_size > 0.0) {
    areas.push_back(compare_areas(a.feature, areal_extent(truth, a.pixel_size), areal_extent(pred, a.pixel_size)));
  }
  const std::string text = format_report(methods, areas);
  write_text(a.report, text);
  out << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feature extraction from grayscale imagery with texture-aware neural networks", "genn"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Render a synthetic scene with truth masks and exemplar patches");
  s->add_option("--spec", synth.spec, "Scene spec file")->required();
  s->add_option("--out-dir", synth.out_dir, "Output directory")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a model bundle for one feature class");
  t->add_option("--class", train.class_name, "Feature class name")->required();
  t->add_option("--positives", train.positives, "Directory of positive exemplar PGMs")->required();
  t->add_option("--negatives", train.negatives, "Directory of negative exemplar PGMs")->required();
  t->add_option("--window", train.window, "Window side in px (odd, >= 3)")->required();
  t->add_option("--out", train.out, "Bundle file to write")->required();
  t->add_option("--lr", train.lr, "Learning rate")->capture_default_str();
  t->add_option("--epochs", train.epochs, "Training epochs")->capture_default_str();
  t->add_option("--seed", train.seed, "Seed for initialization and shuffling")->capture_default_str();
  t->add_option("--som", train.som, "Train a SOM of ROWSxCOLS units on positive windows");
  t->add_option("--hidden", train.hidden, "Hidden layer size")->capture_default_str();
  t->add_option("--levels", train.levels, "GLCM gray levels")->capture_default_str();
  t->add_option("--rules", train.rules, "Rule file stored in the bundle");
  t->add_flag("--canny", train.canny, "Clear Canny edges from the accepted mask");
  t->add_flag("--no-opening", train.no_opening, "Skip morphological opening");
  t->add_option("--threshold", train.threshold, "Accept threshold stored in the bundle")->capture_default_str();
  t->add_option("--bridge-gap", train.bridge_gap, "Enable gap bridging up to N px by default");

  ExtractArgs ext;
  auto* e = app.add_subcommand("extract", "Extract one feature class from an image");
  e->add_option("--bundle", ext.bundle, "Model bundle")->required();
  e->add_option("--input", ext.input, "Input PGM")->required();
  e->add_option("--rules", ext.rules, "Rule file")->required();
  e->add_option("--out-mask", ext.out_mask, "Output mask PGM")->required();
  e->add_option("--bridge-gap", ext.bridge_gap, "Bridge gaps up to N px (0 disables)");
  e->add_option("--threshold", ext.threshold, "Accept threshold override");
  e->add_option("--overlay", ext.overlay, "Write the mask over the stretched input");
  e->add_option("--threads", ext.threads, "Worker threads (0 = all cores)");

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "Score a predicted mask against truth");
  v->add_option("--pred", ev.pred, "Predicted mask PGM")->required();
  v->add_option("--truth", ev.truth, "Truth mask PGM")->required();
  v->add_option("--pixel-size", ev.pixel_size, "Pixel side in meters; adds an areal extent row");
  v->add_option("--report", ev.report, "Report file")->required();
  v->add_option("--method", ev.method, "Methodology label")->capture_default_str();
  v->add_option("--feature", ev.feature, "Feature label for the areal row")->capture_default_str();

  std::string rules_path;
  auto* r = app.add_subcommand("rules-check", "Parse and validate a rule file");
  r->add_option("--rules", rules_path, "Rule file")->required();

  std::vector<std::string> argv_store{"genn"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex, err, err);
    return kExitUsage;
  }

  try {
    if (s->parsed()) run_synth(synth, out);
    if (t->parsed()) run_train(train, out);
    if (e->parsed()) run_extract(ext, out);
    if (v->parsed()) run_eval(ev, out);
    if (r->parsed()) {
      const RuleSet rules = load_rules(rules_path);
      out << rules_path << ": " << rules.size() << " rules ok\n";
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace genn::tools
