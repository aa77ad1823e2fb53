// Copyright 2026 The crglab Authors
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


#include <cstdint>

#include <benchmark/benchmark.h>

#include "crglab/lab.hpp"
#include "crglab/permutation.hpp"
#include "crglab/protocols.hpp"
#include "crglab/sources.hpp"

namespace crglab {
namespace {

void BM_RandomPermutation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(random_permutation(n, rng));
}
BENCHMARK(BM_RandomPermutation)->Arg(8)->Arg(64)->Arg(1024);

void BM_EnumeratePvMix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_source(Family::pv_mix, {3, n, 1}));
}
BENCHMARK(BM_EnumeratePvMix)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PointerChasingRun(benchmark::State& state) {
  const PcsParams params{static_cast<int>(state.range(0)), 64, 8};
  const PcsProtocol spec = pointer_chasing_skg(params);
  Rng rng(2);
  const PcsSample s = sample_pcs(params, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(spec, s.alice, s.bob, seed++));
}
BENCHMARK(BM_PointerChasingRun)->Arg(1)->Arg(5)->Arg(15);

void BM_Search(benchmark::State& state) {
  const auto problem = SearchProblem::success_on(enumerate_source(Family::pv_mix, {1, 3, 1}));
  const SearchBudget budget{static_cast<int>(state.range(0)),
                            static_cast<std::size_t>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_protocol_search(problem, budget));
}
BENCHMARK(BM_Search)->Args({1, 1})->Args({2, 2})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace crglab

BENCHMARK_MAIN();
