// Copyright 2026 The ASC Toolkit Authors. All rights reserved.
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

// Micro benchmarks for the hot paths: front-ends, convolution, one training
// step and fusion. Run with --benchmark_filter to pick a subset.

#include <benchmark/benchmark.h>

#include <random>

#include "asc/augment/augment.hpp"
#include "asc/eval/fusion.hpp"
#include "asc/frontend/feature_extractor.hpp"
#include "asc/model/network.hpp"
#include "asc/random.hpp"
#include "asc/runtime.hpp"
#include "asc/synth/synth.hpp"
#include "asc/tensor/graph.hpp"
#include "asc/tensor/ops.hpp"
#include "asc/train/trainer.hpp"

using namespace asc;

namespace {

const audio::AudioClip& bench_clip() {
  static const audio::AudioClip clip = [] {
    auto rng = make_rng(1, {});
    return synth::synth_clip(synth::scene_presets()[3], 10.0, rng);
  }();
  return clip;
}

const frontend::FeatureExtractor& extractor() {
  static const frontend::FeatureExtractor fx;
  return fx;
}

void BM_Frontend(benchmark::State& state) {
  const auto kind = static_cast<frontend::FrontendKind>(state.range(0));
  const auto& fx = extractor();
  for (auto _ : state) benchmark::DoNotOptimize(fx.extract(bench_clip(), kind));
  state.SetLabel(std::string(frontend::to_string(kind)));
}
BENCHMARK(BM_Frontend)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

nn::Tensor<float> random_tensor(const nn::Shape& shape, std::uint64_t seed) {
  nn::Tensor<float> t(shape);
  auto rng = make_rng(seed, {});
  std::normal_distribution<float> nd(0.0f, 1.0f);
  for (auto& v : t.values()) v = nd(rng);
  return t;
}

// Forward + backward of a 3x3 same convolution at block-1 scale.
void BM_Conv3x3(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto x = random_tensor({8, 64, 128, c}, 1);
  nn::Parameter<float> w("w", random_tensor({3, 3, c, c}, 2)), b("b", nn::Tensor<float>({c}));
  for (auto _ : state) {
    nn::Graph<float> g;
    const auto y = nn::conv2d(g, g.input(x), g.param(w), g.param(b));
    g.backward(nn::sum(g, y));
    benchmark::DoNotOptimize(w.grad.data());
  }
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_Conv3x3)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  const std::size_t B = 8;
  train::TrainingSet data;
  data.freq = 128;
  data.time = 305;
  data.channels = 3;
  data.features = random_tensor({B, 128, 305, 3}, 3).values();
  for (std::size_t i = 0; i < B; ++i) data.labels.push_back(static_cast<int>(i % 10));
  model::Network net(model::make_arch("red03"), 1);
  train::TrainConfig cfg;
  cfg.batch_size = B;
  cfg.epochs = cfg.phase1_epochs = 1;
  for (auto _ : state) train::fit(net, data, cfg, augment::AugmentConfig{});
  state.SetItemsProcessed(state.iterations() * B);
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

void BM_ProdFusion(benchmark::State& state) {
  const std::size_t S = 3, N = static_cast<std::size_t>(state.range(0)), M = 10;
  eval::ProbMatrix pm(S, N, M);
  auto rng = make_rng(4, {});
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t n = 0; n < N; ++n) {
      double z = 0;
      for (std::size_t m = 0; m < M; ++m) z += (pm.at(s, n, m) = u(rng));
      for (std::size_t m = 0; m < M; ++m) pm.at(s, n, m) /= z;
    }
  for (auto _ : state) benchmark::DoNotOptimize(eval::predict_label(eval::prod_fusion(pm), M));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(N));
}
BENCHMARK(BM_ProdFusion)->Arg(2970)->Arg(100000);

}  // namespace

int main(int argc, char** argv) {
  tune_allocator();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
