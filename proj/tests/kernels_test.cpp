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

#include "qsdet/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "qsdet/parallel.hpp"
#include "qsdet/rng.hpp"

namespace qsdet {
namespace {

std::vector<kernels::Complex> random_vector(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<kernels::Complex> v(n);
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  return v;
}

TEST(Kernels, InnerProductParallelMatchesSerial) {
  for (std::size_t n : {1u, 17u, 4096u, 4097u, 100000u}) {
    const auto a = random_vector(n, 1), b = random_vector(n, 2);
    const auto s = kernels::inner_product_serial(a, b);
    const auto p = kernels::inner_product_omp(a, b);
    EXPECT_NEAR(std::abs(s - p), 0.0, 1e-9 * std::sqrt(static_cast<double>(n))) << n;
    // The chunked sum does not depend on the thread count.
    EXPECT_EQ(p, kernels::inner_product_omp(a, b));
  }
}

TEST(Kernels, InnerProductConjugatesLeft) {
  const std::vector<kernels::Complex> a{{0, 1}}, b{{0, 1}};
  EXPECT_EQ(kernels::inner_product_serial(a, b), kernels::Complex(1, 0));
}

TEST(Kernels, AccumulateOuterParallelIsBitIdentical) {
  SeededRng rng(3);
  Eigen::MatrixXcd batch(24, 37);
  for (Eigen::Index i = 0; i < batch.size(); ++i) batch.data()[i] = {rng.normal(), rng.normal()};
  Eigen::MatrixXcd serial = Eigen::MatrixXcd::Identity(24, 24);
  Eigen::MatrixXcd parallel = serial;
  kernels::accumulate_outer_serial(serial, batch, 0.25);
  kernels::accumulate_outer_omp(parallel, batch, 0.25);
  EXPECT_TRUE(serial == parallel);
  const Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(24, 24) + 0.25 * batch * batch.adjoint();
  EXPECT_LT((serial - expected).norm(), 1e-10);
}

TEST(ForEachIndex, VisitsEveryIndexOnce) {
  for (Exec exec : {Exec::kSerial, Exec::kParallel}) {
    std::vector<std::atomic<int>> hits(1000);
    for_each_index(hits.size(), exec, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ForEachIndex, RethrowsLowestFailingIndex) {
  for (Exec exec : {Exec::kSerial, Exec::kParallel}) {
    try {
      for_each_index(500, exec, [](std::size_t i) {
        if (i == 123 || i == 400) throw std::runtime_error(std::to_string(i));
      });
      FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "123");
    }
  }
}

}  // namespace
}  // namespace qsdet
