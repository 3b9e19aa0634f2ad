// Copyright 2026 The layoutvqa Authors
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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "layoutvqa/layout_hash.hpp"
#include "layoutvqa/metrics.hpp"
#include "layoutvqa/model.hpp"
#include "layoutvqa/synth.hpp"
#include "layoutvqa/train.hpp"

using namespace layoutvqa;

static void BM_LayoutHash(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::vector<BoundingBox> boxes;
  for (int i = 0; i < state.range(0); ++i) {
    const double x = u(rng);
    const double y = u(rng);
    boxes.push_back({x, y, x + 20, y + 8});
  }
  for (auto _ : state) benchmark::DoNotOptimize(layout_hash(boxes, 4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LayoutHash)->Arg(16)->Arg(180);

static void BM_Anls(benchmark::State& state) {
  const AnswerPair p{"Trà đào cam sả (L) 45.000", "Trà đào cam sả (M) 40.000"};
  for (auto _ : state) benchmark::DoNotOptimize(anls_pair(p));
}
BENCHMARK(BM_Anls);

static void BM_TrainStep(benchmark::State& state) {
  SynthConfig sc;
  sc.shuffle = true;
  sc.duplicate_fraction = 0.125;
  const Dataset ds = gen_dataset(sc, 64);
  ModelConfig mc;
  mc.max_input_len = 40;
  mc.max_answer_len = 4;
  Model m = init_model(mc, Vocabulary::build(ds));
  const auto ex = build_examples(ds, m.vocab, mc);
  TrainConfig tc;
  tc.steps = 1;
  tc.warmup_steps = 0;
  for (auto _ : state) train_examples(m, ex, tc);
  state.SetItemsProcessed(state.iterations() * tc.batch_size);
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
