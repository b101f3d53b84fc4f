// Copyright 2026 The Setchain Authors
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

// Parallel kernels against their serial references. Each pair runs over the
// same inputs; the Arg is the number of elements.

#include <benchmark/benchmark.h>

#include "setchain/kernels.hpp"

namespace {

using namespace setchain;

struct Workload {
  crypto::KeyRegistry registry;
  std::map<ProcessId, crypto::KeyPair> keys;
  CorpusSpec spec;
  std::vector<Element> elements;
  std::vector<Bytes> bytes;

  explicit Workload(std::int64_t count) {
    spec.servers = 10;
    spec.sending_rate = static_cast<double>(count);
    spec.duration_s = 1;
    registry = crypto::KeyRegistry::build(spec.seed, spec.servers, spec.servers, &keys);
    for (const CorpusEntry& e : kernels::generate_corpus_serial(spec, keys).entries) {
      elements.push_back(e.element);
      bytes.push_back(e.element.canonical_bytes());
    }
  }
};

const Workload& workload(std::int64_t count) {
  static std::map<std::int64_t, Workload> cache;
  auto it = cache.find(count);
  if (it == cache.end()) it = cache.emplace(count, Workload(count)).first;
  return it->second;
}

template <auto Kernel>
void BM_Validate(benchmark::State& state) {
  const Workload& w = workload(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.elements, w.registry));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Generate(benchmark::State& state) {
  const Workload& w = workload(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.spec, w.keys));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Digest(benchmark::State& state) {
  const Workload& w = workload(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.bytes));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
}

BENCHMARK(BM_Validate<kernels::validate_elements_serial>)->Name("validate_elements/serial")->Apply(sizes);
BENCHMARK(BM_Validate<kernels::validate_elements>)->Name("validate_elements/parallel")->Apply(sizes);
BENCHMARK(BM_Generate<kernels::generate_corpus_serial>)->Name("generate_corpus/serial")->Apply(sizes);
BENCHMARK(BM_Generate<kernels::generate_corpus>)->Name("generate_corpus/parallel")->Apply(sizes);
BENCHMARK(BM_Digest<kernels::digest_all_serial>)->Name("digest_all/serial")->Apply(sizes);
BENCHMARK(BM_Digest<kernels::digest_all>)->Name("digest_all/parallel")->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
