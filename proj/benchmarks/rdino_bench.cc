// Copyright 2026 The rdino authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "rdino/common/rng.h"
#include "rdino/numerics/ops.h"

namespace {

using namespace rdino;

void BM_MatMul(benchmark::State& state) {
  int64_t n = state.range(0);
  Rng rng(1);
  Var a(Tensor::RandomGaussian({n, n}, 1.0, rng));
  Var b(Tensor::RandomGaussian({n, n}, 1.0, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(MatMul(a, b).value().data().data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_MatMul)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
