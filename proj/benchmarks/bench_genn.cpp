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

#include <benchmark/benchmark.h>

#include "genn/nn.hpp"
#include "genn/pipeline.hpp"
#include "genn/preprocess.hpp"
#include "genn/rng.hpp"
#include "genn/texture.hpp"

namespace {

genn::Raster noise(std::size_t w, std::size_t h, std::uint64_t seed) {
  genn::Rng rng(seed);
  genn::Raster r(w, h);
  for (auto& v : r.values()) v = static_cast<std::uint8_t>(rng.below(256));
  return r;
}

void BM_GlcmHaralick(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const genn::LevelGrid g = genn::quantize(noise(64, 64, 1), 8);
  const genn::Window w{10, 10, size};
  for (auto _ : state) {
    const auto glcm = genn::compute_glcm(g, w, {});
    benchmark::DoNotOptimize(genn::haralick_features(glcm));
  }
}
BENCHMARK(BM_GlcmHaralick)->Arg(5)->Arg(9)->Arg(15);

void BM_Forward(benchmark::State& state) {
  const auto inputs = static_cast<std::size_t>(state.range(0));
  const auto net = genn::init_network({inputs, 16, 2}, 3);
  std::vector<double> x(inputs, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(genn::forward(net, x));
}
BENCHMARK(BM_Forward)->Arg(38)->Arg(94)->Arg(209);

void BM_Canny(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const genn::Raster r = noise(side, side, 2);
  for (auto _ : state) benchmark::DoNotOptimize(genn::canny(r, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_Canny)->Arg(128)->Arg(512);

void BM_ExtractScan(benchmark::State& state) {
  genn::Rng rng(4);
  std::vector<genn::Raster> pos, neg;
  for (int k = 0; k < 4; ++k) {
    pos.push_back(noise(24, 24, rng.next()));
    genn::Raster flat = noise(24, 24, rng.next());
    for (auto& v : flat.values()) v = static_cast<std::uint8_t>(v / 8);
    neg.push_back(flat);
  }
  genn::TrainParams p;
  p.nn.max_epochs = 5;
  const genn::ModelBundle b = genn::train_pipeline(pos, neg, "bench", p);
  const auto side = static_cast<std::size_t>(state.range(0));
  const genn::Raster scene = noise(side, side, 5);
  genn::ExtractOptions options;
  options.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(genn::extract(scene, b, options));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_ExtractScan)->Args({128, 1})->Args({128, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
