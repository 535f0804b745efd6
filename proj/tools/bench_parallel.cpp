// Copyright 2026 The IUTQ Authors
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

#include "iutq/iutq_engine.hpp"
#include "iutq/surrogate.hpp"
#include "iutq/synth.hpp"

#include <benchmark/benchmark.h>

#include <map>

namespace
{

const iutq::ScenarioTrackset & recording(std::size_t agents)
{
  static std::map<std::size_t, iutq::ScenarioTrackset> cache;
  auto it = cache.find(agents);
  if (it == cache.end()) {
    iutq::synth::ScenarioSpec spec;
    spec.scene.seed = 11;
    spec.scene.n_agents = agents;
    spec.scene.speed_law = iutq::synth::SpeedLaw::bimodal;
    spec.n_frames = 200;
    it = cache.emplace(agents, iutq::synth::build_scenario(spec)).first;
  }
  return it->second;
}

void iutq_parallel(benchmark::State & state)
{
  const auto & ts = recording(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iutq::score_all(ts, {}));
  }
}

void iutq_serial(benchmark::State & state)
{
  const auto & ts = recording(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iutq::score_all_serial(ts, {}));
  }
}

void surrogate_parallel(benchmark::State & state)
{
  const auto & ts = recording(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iutq::score_all_surrogates(ts, {}));
  }
}

void surrogate_serial(benchmark::State & state)
{
  const auto & ts = recording(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iutq::score_all_surrogates_serial(ts, {}));
  }
}

}  // namespace

BENCHMARK(iutq_parallel)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(iutq_serial)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(surrogate_parallel)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(surrogate_serial)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
