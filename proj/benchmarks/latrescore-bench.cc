// benchmarks/latrescore-bench.cc

// Copyright 2026  The latrescore Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <benchmark/benchmark.h>

#include "latrescore/lattice-algo.h"
#include "latrescore/lattice-io.h"
#include "latrescore/rescore.h"
#include "latrescore/wer.h"
#include "testing/random-lattice.h"

namespace latrescore {
namespace {

std::vector<Lattice> BenchLattices(int max_states) {
  testing::RandomLatticeOptions opts;
  opts.max_states = max_states;
  opts.max_paths = 1000000;
  return testing::RandomLatticeCorpus(7, 64, opts);
}

void BM_BestPath(benchmark::State &state) {
  std::vector<Lattice> lats = BenchLattices(static_cast<int>(state.range(0)));
  RescoreConfig cfg{7, 0.5, 1};
  for (auto _ : state)
    for (const Lattice &lat : lats) benchmark::DoNotOptimize(BestPath(lat, cfg));
  state.SetItemsProcessed(state.iterations() * lats.size());
}
BENCHMARK(BM_BestPath)->Arg(10)->Arg(20);

void BM_NBest(benchmark::State &state) {
  std::vector<Lattice> lats = BenchLattices(16);
  RescoreConfig cfg{7, 0.5, 1};
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state)
    for (const Lattice &lat : lats) benchmark::DoNotOptimize(NBest(lat, k, cfg));
  state.SetItemsProcessed(state.iterations() * lats.size());
}
BENCHMARK(BM_NBest)->Arg(1)->Arg(10)->Arg(50);

void BM_RescoreLattice(benchmark::State &state) {
  std::vector<Lattice> lats = BenchLattices(16);
  std::mt19937_64 rng(8);
  NGramLM lm = TrainNGram(testing::RandomCorpus(rng, 200, 8, {"a", "b", "c", "d"}),
                          static_cast<int>(state.range(0)));
  RescoreConfig cfg{7, 0.5, 1};
  for (auto _ : state)
    for (const Lattice &lat : lats) benchmark::DoNotOptimize(RescoreLattice(lat, lm, cfg));
  state.SetItemsProcessed(state.iterations() * lats.size());
}
BENCHMARK(BM_RescoreLattice)->Arg(2)->Arg(3);

void BM_RescoreNBest(benchmark::State &state) {
  std::vector<Lattice> lats = BenchLattices(16);
  std::mt19937_64 rng(9);
  NGramLM lm = TrainNGram(testing::RandomCorpus(rng, 200, 8, {"a", "b", "c", "d"}), 3);
  RescoreConfig cfg{7, 0.5, 1};
  for (auto _ : state)
    for (const Lattice &lat : lats) benchmark::DoNotOptimize(RescoreNBest(lat, lm, 50, cfg));
  state.SetItemsProcessed(state.iterations() * lats.size());
}
BENCHMARK(BM_RescoreNBest);

void BM_ParseWrite(benchmark::State &state) {
  std::vector<Lattice> lats = BenchLattices(16);
  std::vector<std::string> texts;
  for (const Lattice &lat : lats) texts.push_back(WriteLatticeText(lat));
  for (auto _ : state)
    for (const std::string &t : texts)
      benchmark::DoNotOptimize(WriteLatticeText(ParseLatticeText(t)));
  state.SetItemsProcessed(state.iterations() * texts.size());
}
BENCHMARK(BM_ParseWrite);

void BM_Align(benchmark::State &state) {
  std::mt19937_64 rng(10);
  const int n = static_cast<int>(state.range(0));
  std::vector<std::string> ref = testing::RandomCorpus(rng, 1, n, {"a", "b", "c", "d"})[0];
  std::vector<std::string> hyp = testing::RandomCorpus(rng, 1, n, {"a", "b", "c", "d"})[0];
  for (auto _ : state) benchmark::DoNotOptimize(Align(ref, hyp));
}
BENCHMARK(BM_Align)->Arg(20)->Arg(200);

}  // namespace
}  // namespace latrescore

BENCHMARK_MAIN();
