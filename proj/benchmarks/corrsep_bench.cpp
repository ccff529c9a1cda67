// Copyright 2026 The corrsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "corrsep/distance.hpp"
#include "corrsep/fa_model.hpp"
#include "corrsep/impute.hpp"
#include "corrsep/separation.hpp"
#include "corrsep/simulate.hpp"

namespace {

using corrsep::Dataset;

Dataset cluster(std::size_t rows, std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  corrsep::GaussianClusterSpec spec;
  spec.dims = dims;
  return corrsep::gaussian_cluster(rows, spec, rng);
}

corrsep::AnomalyParams params(double alpha) {
  corrsep::AnomalyParams p;
  p.alpha = alpha;
  return p;
}

void BM_RankedDistance(benchmark::State& state) {
  const auto dims = static_cast<std::size_t>(state.range(0));
  const Dataset data = cluster(2, dims, 1);
  const double alpha = static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(corrsep::ranked_distance(data.row(0), data.row(1), alpha));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RankedDistance)->ArgsProduct({{16, 64, 256}, {50, 75, 100}});

void BM_PrefixCache(benchmark::State& state) {
  const Dataset data = cluster(static_cast<std::size_t>(state.range(0)), 64, 2);
  for (auto _ : state) {
    corrsep::DistanceCache cache(data);
    benchmark::DoNotOptimize(cache.volume(0, 1, 64));
  }
}
BENCHMARK(BM_PrefixCache)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ScoreModelBuild(benchmark::State& state) {
  const Dataset data = cluster(static_cast<std::size_t>(state.range(0)), 64, 3);
  const double alpha = static_cast<double>(state.range(1)) / 100.0;
  for (auto _ : state) {
    corrsep::ScoreModel model(data, corrsep::build_partition(64, 4), params(alpha), 1);
    benchmark::DoNotOptimize(model.reference_score(0, 0));
  }
}
BENCHMARK(BM_ScoreModelBuild)
    ->ArgsProduct({{200, 500}, {75, 100}})
    ->Unit(benchmark::kMillisecond);

void BM_SeparateAndImpute(benchmark::State& state) {
  const Dataset ref = cluster(500, 64, 4);
  const double alpha = static_cast<double>(state.range(0)) / 100.0;
  const corrsep::ScoreModel model(ref, corrsep::build_partition(64, 4), params(alpha), 1);
  corrsep::CorruptionSpec spec;
  spec.seed = 5;
  const corrsep::CorruptedData test = corrsep::corrupt(cluster(64, 64, 6), spec);
  std::size_t i = 0;
  for (auto _ : state) {
    corrsep::QueryEvaluator query(model, test.data.row(i++ % test.data.rows()));
    const corrsep::SeparationResult result = corrsep::tcs_separate(query, 0.05);
    benchmark::DoNotOptimize(corrsep::impute(query, result, {}));
  }
}
BENCHMARK(BM_SeparateAndImpute)->Arg(75)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_FaRecursion(benchmark::State& state) {
  corrsep::FaModelParams p;
  p.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(corrsep::fa_recursion(p));
}
BENCHMARK(BM_FaRecursion)->Arg(2)->Arg(6)->Arg(12);

void BM_FaBruteforce(benchmark::State& state) {
  corrsep::FaModelParams p;
  p.depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(corrsep::fa_bruteforce(p));
}
BENCHMARK(BM_FaBruteforce)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
