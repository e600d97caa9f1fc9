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

#include "qsdet/rng.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace qsdet {
namespace {

// Reference vectors published with the Random123 distribution (kat_vectors).
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  EXPECT_EQ(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(SeededRng, SameSeedSameStream) {
  SeededRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
}

TEST(SeededRng, SplitDoesNotAdvanceParent) {
  SeededRng a(5);
  const SeededRng child = a.split(3);
  EXPECT_EQ(a.counter(), 0u);
  SeededRng c1 = a.split(3), c2 = child;
  EXPECT_EQ(c1.next_u64(), c2.next_u64());
  SeededRng other = a.split(4);
  SeededRng again = a.split(3);
  EXPECT_NE(other.next_u64(), again.next_u64());
}

TEST(SeededRng, UniformAndCoinMoments) {
  SeededRng rng(11);
  constexpr int kN = 200000;
  double sum = 0.0;
  int heads = 0;
  for (int i = 0; i < kN; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    heads += rng.coin() ? 1 : 0;
  }
  EXPECT_NEAR(sum / kN, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / kN));
  EXPECT_NEAR(static_cast<double>(heads) / kN, 0.5, 4.0 * std::sqrt(0.25 / kN));
}

TEST(SeededRng, NormalMoments) {
  SeededRng rng(12);
  constexpr int kN = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / kN, 0.0, 4.0 / std::sqrt(kN));
  EXPECT_NEAR(s2 / kN, 1.0, 4.0 * std::sqrt(2.0 / kN));
}

TEST(SeededRng, UniformBelowCoversRange) {
  SeededRng rng(13);
  std::vector<int> counts(7, 0);
  constexpr int kN = 70000;
  for (int i = 0; i < kN; ++i) {
    const auto v = rng.uniform_below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, kN / 7.0, 5.0 * std::sqrt(kN / 7.0));
  EXPECT_EQ(rng.uniform_below(1), 0u);
}

TEST(DeriveBits, DeterministicAndDomainSeparated) {
  const BitString a = derive_bits(1, 1, 4, 9, 40);
  EXPECT_EQ(a.size(), 40u);
  EXPECT_EQ(a, derive_bits(1, 1, 4, 9, 40));
  EXPECT_NE(a, derive_bits(1, 2, 4, 9, 40));
  EXPECT_NE(a, derive_bits(1, 1, 5, 9, 40));
  EXPECT_NE(a, derive_bits(1, 1, 4, 10, 40));
  EXPECT_NE(a, derive_bits(2, 1, 4, 9, 40));
  // Prefix-consistent across lengths.
  EXPECT_EQ(derive_bits(1, 1, 4, 9, 200).slice(0, 40), a);
}

}  // namespace
}  // namespace qsdet
