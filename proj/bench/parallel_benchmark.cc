// Copyright 2026 The sense-align Authors
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

// Parallel kernels against their serial references on synthetic inventories.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "sense_align/alignment.h"
#include "sense_align/embedding.h"
#include "sense_align/head.h"
#include "sense_align/inventory.h"
#include "sense_align/wsdeval.h"

namespace sense_align {
namespace {

constexpr uint32_t kDim = 256;

// `words` polysemous nouns with 1-8 glosses of a few sentences each.
Inventory SyntheticInventory(const std::string& name, size_t words, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> senses(1, 8), vocab(0, 4999);
  Inventory inv(name);
  for (size_t w = 0; w < words; ++w) {
    const std::string lemma = "lemma" + std::to_string(w);
    std::vector<GlossText> glosses(senses(rng));
    for (GlossText& g : glosses) {
      for (int t = 0; t < 10; ++t) g.definition += "tok" + std::to_string(vocab(rng)) + " ";
      for (int e = 0; e < 2; ++e) {
        std::string s = lemma;
        for (int t = 0; t < 12; ++t) s += " tok" + std::to_string(vocab(rng));
        g.examples.push_back({s, {}});
      }
    }
    inv.AddEntry(lemma, PosTag::kNoun, std::move(glosses));
  }
  return inv;
}

struct AlignSetup {
  Inventory a = SyntheticInventory("a", 2000, 1);
  Inventory b = SyntheticInventory("b", 2000, 2);
  EmbeddingStore store{kDim};
  AlignSetup() {
    AddBaselineEmbeddings(a, 17, store);
    AddBaselineEmbeddings(b, 17, store);
  }
};

const AlignSetup& Setup() {
  static const AlignSetup setup;
  return setup;
}

void BM_AlignSerial(benchmark::State& state) {
  const AlignSetup& s = Setup();
  for (auto _ : state) {
    benchmark::DoNotOptimize(AlignInventoriesSerial(s.a, s.b, s.store, 0.6));
  }
}
BENCHMARK(BM_AlignSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AlignParallel(benchmark::State& state) {
  const AlignSetup& s = Setup();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(AlignInventories(s.a, s.b, s.store, {0.6, threads}));
  }
}
BENCHMARK(BM_AlignParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EmbedSerial(benchmark::State& state) {
  const AlignSetup& s = Setup();
  for (auto _ : state) {
    EmbeddingStore store(kDim);
    AddBaselineEmbeddingsSerial(s.a, 17, store);
    benchmark::DoNotOptimize(store.size());
  }
}
BENCHMARK(BM_EmbedSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EmbedParallel(benchmark::State& state) {
  const AlignSetup& s = Setup();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    EmbeddingStore store(kDim);
    AddBaselineEmbeddings(s.a, 17, store, threads);
    benchmark::DoNotOptimize(store.size());
  }
}
BENCHMARK(BM_EmbedParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

// One WSD instance per example sentence of `a`, scored by a small fixed head.
struct WsdSetup {
  HeadModel model{kDim};
  EmbeddingStore store{kDim};
  std::vector<WsdInstance> instances;
  WsdSetup() {
    const AlignSetup& s = Setup();
    for (size_t i = 0; i < model.weights().size(); ++i) {
      model.weights()[i] = 1e-3 * static_cast<double>(i % 7);
    }
    for (const std::string& key : s.store.keys()) {
      if (key.rfind("g:a:", 0) == 0) store.Add(key, s.store.Get(key));
    }
    for (const auto& [key, glosses] : s.a.entries()) {
      WsdInstance inst;
      inst.id = key.lemma;
      inst.lemma = key.lemma;
      for (const Gloss& g : glosses) inst.candidates.push_back(g.id);
      inst.gold = {glosses.front().id};
      store.Add(InstanceKey(inst.id), s.store.Get(ContextKey(glosses.front().id, 0)));
      instances.push_back(std::move(inst));
    }
  }
};

void BM_WsdSerial(benchmark::State& state) {
  static const WsdSetup w;
  for (auto _ : state) {
    benchmark::DoNotOptimize(WsdPredictAllSerial(w.model, w.store, w.instances));
  }
}
BENCHMARK(BM_WsdSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_WsdParallel(benchmark::State& state) {
  static const WsdSetup w;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(WsdPredictAll(w.model, w.store, w.instances, threads));
  }
}
BENCHMARK(BM_WsdParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace sense_align
BENCHMARK_MAIN();
