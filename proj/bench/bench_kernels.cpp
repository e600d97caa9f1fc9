// Copyright 2026 The qsdet Authors
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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "qsdet/experiments.hpp"
#include "qsdet/kernels.hpp"
#include "qsdet/extract.hpp"
#include "qsdet/rng.hpp"

namespace {

using qsdet::Exec;
using qsdet::kernels::Complex;

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
  qsdet::SeededRng rng(seed);
  std::vector<Complex> v(n);
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  return v;
}

void BM_InnerProduct(benchmark::State& state, Exec exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(n, 1), b = random_vector(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qsdet::kernels::inner_product(a, b, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AccumulateOuter(benchmark::State& state, Exec exec) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  qsdet::SeededRng rng(3);
  Eigen::MatrixXcd batch(dim, 512);
  for (Eigen::Index i = 0; i < batch.size(); ++i) batch.data()[i] = {rng.normal(), rng.normal()};
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (auto _ : state) {
    qsdet::kernels::accumulate_outer(acc, batch, 1.0, exec);
    benchmark::ClobberMemory();
  }
}

void BM_GaussianBlocks(benchmark::State& state, Exec exec) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsdet::gaussian_block_check(4096, 200, qsdet::SeededRng(4), exec));
  }
}

void BM_MomentDistance(benchmark::State& state, Exec exec) {
  const auto gen = qsdet::random_function_phase_sprs(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qsdet::moment_distance(gen, 2, 20000, qsdet::MomentMode::kMonteCarlo, qsdet::SeededRng(5), exec));
  }
}

BENCHMARK_CAPTURE(BM_InnerProduct, serial, Exec::kSerial)->Arg(1 << 12)->Arg(1 << 19);
BENCHMARK_CAPTURE(BM_InnerProduct, omp, Exec::kParallel)->Arg(1 << 12)->Arg(1 << 19);
BENCHMARK_CAPTURE(BM_AccumulateOuter, serial, Exec::kSerial)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_AccumulateOuter, omp, Exec::kParallel)->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_GaussianBlocks, serial, Exec::kSerial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GaussianBlocks, omp, Exec::kParallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MomentDistance, serial, Exec::kSerial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MomentDistance, omp, Exec::kParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
