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

#include "qsdet/oracles.hpp"

#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "qsdet/errors.hpp"
#include "qsdet/experiments.hpp"

namespace qsdet {
namespace {

double chi_square_statistic(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (double c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

double chi_square_critical(std::size_t buckets, double alpha) {
  boost::math::chi_squared dist(static_cast<double>(buckets - 1));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

TEST(WorldKind, Names) {
  EXPECT_EQ(world_kind_from_string("flip"), WorldKind::kFlip);
  EXPECT_EQ(world_kind_from_string("sampler"), WorldKind::kSampler);
  EXPECT_STREQ(to_string(WorldKind::kBot), "bot");
  EXPECT_THROW(world_kind_from_string("other"), InvalidArgument);
}

TEST(OracleWorld, SignaturesAndJson) {
  const auto flip = OracleWorld::flip(1, 4);
  EXPECT_EQ(flip.o_length(3), 24u);
  EXPECT_EQ(flip.O(BitString::zeros(3)).size(), 24u);
  EXPECT_EQ(flip.P(BitString::zeros(6)).size(), 3u);
  EXPECT_THROW(flip.O(BitString::zeros(5)), InvalidArgument);
  EXPECT_EQ(OracleWorld::sampler(1, 4).o_length(4), 4u);
  const auto bot = OracleWorld::bot(9, 12, 1.0, 3);
  EXPECT_EQ(bot.o_length(12), 36u);
  const auto j = bot.to_json();
  EXPECT_EQ(j["world_kind"], "bot");
  EXPECT_EQ(j["derivation_id"], "philox4x32-10/v1");
  const auto back = OracleWorld::from_json(j);
  for (std::uint64_t x = 0; x < 64; ++x) {
    const auto bx = BitString::from_uint(x, 12);
    EXPECT_EQ(back.O(bx), bot.O(bx));
    EXPECT_EQ(back.Q(bx), bot.Q(bx));
    EXPECT_EQ(back.permute(12, x), bot.permute(12, x));
  }
  EXPECT_THROW(OracleWorld::from_json({{"world_kind", "flip"}, {"seed", 1}, {"n_max", 2}, {"derivation_id", "x"}}),
               InvalidArgument);
}

TEST(OracleWorld, SameSeedSameTables) {
  const auto a = OracleWorld::sampler(5, 8), b = OracleWorld::sampler(5, 8), c = OracleWorld::sampler(6, 8);
  int differ = 0;
  for (std::uint64_t x = 0; x < 256; ++x) {
    const auto bx = BitString::from_uint(x, 8);
    EXPECT_EQ(a.O(bx), b.O(bx));
    differ += a.O(bx) != c.O(bx) ? 1 : 0;
  }
  EXPECT_GT(differ, 200);
}

TEST(BotOracleParams, Rules) {
  const auto p = BotOracleParams::make(16, 1.0, 32);
  EXPECT_DOUBLE_EQ(p.mu, 1.0 / 16);
  EXPECT_EQ(p.w, 6u);
  const double tail = std::ldexp(1.0, -static_cast<int>(p.w));
  EXPECT_LE(tail, p.mu / 4);
  EXPECT_GE(tail, p.mu / 16);
  EXPECT_THROW(BotOracleParams::make(2, 1.0, 4), InvalidArgument);  // w = 3 > n
  EXPECT_THROW(BotOracleParams::make(8, 1.0, 8), InvalidArgument);  // m must exceed n
}

TEST(BotOracle, PermutationIsBijection) {
  const auto world = OracleWorld::bot(3, 10);
  std::set<std::uint64_t> image;
  for (std::uint64_t x = 0; x < 1024; ++x) image.insert(world.permute(10, x));
  EXPECT_EQ(image.size(), 1024u);
  EXPECT_EQ(*image.rbegin(), 1023u);
}

TEST(BotOracle, GoodSetMassIsExact) {
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    const auto world = OracleWorld::bot(seed, 12);
    const auto w = world.bot_params(12).w;
    const auto good = bot_oracle_good_set(world, 12);
    EXPECT_EQ(good.size(), 4096u - (4096u >> w));
    EXPECT_EQ(good, bot_oracle_good_set(OracleWorld::bot(seed, 12), 12));
  }
}

TEST(BotOracle, GoodInputsNeverAbort) {
  const auto world = OracleWorld::bot(4, 12);
  SeededRng rng(1);
  int checked = 0;
  for (std::uint64_t x = 0; x < 4096 && checked < 50; ++x) {
    const auto bx = BitString::from_uint(x, 12);
    if (!bot_oracle_is_good(world, bx)) continue;
    ++checked;
    EXPECT_DOUBLE_EQ(bot_oracle_bot_probability(world, bx), 0.0);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(bot_oracle_eval(world, bx, rng), BotValue(world.O(bx)));
  }
}

TEST(BotOracle, BadInputFrequencyMatchesQ) {
  const auto world = OracleWorld::bot(5, 12);
  SeededRng rng(2);
  int checked = 0;
  for (std::uint64_t x = 0; x < 4096 && checked < 5; ++x) {
    const auto bx = BitString::from_uint(x, 12);
    if (bot_oracle_is_good(world, bx)) continue;
    ++checked;
    const double p = bot_oracle_bot_probability(world, bx);
    EXPECT_DOUBLE_EQ(p, static_cast<double>(world.Q(bx).to_uint()) / 4096.0);
    constexpr int kN = 20000;
    int bots = 0;
    for (int i = 0; i < kN; ++i) {
      const auto v = bot_oracle_eval(world, bx, rng);
      if (v.is_bot()) {
        ++bots;
      } else {
        EXPECT_EQ(v.value(), world.O(bx));
      }
    }
    EXPECT_NEAR(bots / double(kN), p, 3.0 * std::sqrt(p * (1 - p) / kN) + 1e-12);
  }
  EXPECT_EQ(checked, 5);
}

TEST(BotOracle, ZeroQMeansNeverAbort) {
  // A bad input whose Q value is 0 always returns O_n(x); search small worlds.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto world = OracleWorld::bot(seed, 8);
    for (std::uint64_t x = 0; x < 256; ++x) {
      const auto bx = BitString::from_uint(x, 8);
      if (bot_oracle_is_good(world, bx) || !world.Q(bx).all_zero()) continue;
      SeededRng rng(seed);
      for (int i = 0; i < 100; ++i) EXPECT_FALSE(bot_oracle_eval(world, bx, rng).is_bot());
      return;
    }
  }
  GTEST_SKIP() << "no bad input with Q = 0 found";
}

TEST(FlipOracle, SelfInverseAndUniformKeys) {
  const auto world = OracleWorld::flip(7, 2);
  const RankTwoFlip flip = flip_oracle(world, 2);
  ASSERT_EQ(flip.dim(), std::size_t{1} << 19);
  const StateVector zero = StateVector::basis(flip.dim(), 0);
  const StateVector psi = apply_flip(flip, zero);
  const StateVector back = apply_flip(flip, psi);
  double err = 0.0;
  for (std::size_t i = 0; i < flip.dim(); ++i) err = std::max(err, std::abs(back[i] - zero[i]));
  EXPECT_LT(err, 1e-10);
  for (std::uint64_t x = 0; x < 4; ++x) {
    const auto y = world.O(BitString::from_uint(x, 2)).to_uint();
    EXPECT_NEAR(std::norm(psi[flip_register_index(2, x, y)]), 0.25, 1e-12);
  }
  SeededRng rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto idx = measure_computational(psi, rng);
    EXPECT_EQ(idx >> 18, 1u);
    const auto x = BitString::from_uint((idx >> 16) & 3, 2);
    EXPECT_EQ(world.O(x).to_uint(), idx & 0xFFFF);
  }
  EXPECT_THROW(flip_oracle(OracleWorld::flip(7, 3), 3), BudgetExceeded);
}

TEST(FlipOracle, LazyMatchesDense) {
  const auto world = OracleWorld::flip(9, 4);
  const RankTwoFlip dense = flip_oracle(world, 2);
  const SparseFlip lazy = flip_oracle_lazy(world, 2);
  for (const auto& [idx, amp] : lazy.b()) EXPECT_NEAR(std::abs(dense.b()[idx] - amp), 0.0, 1e-14);
  const SparseState out = lazy.apply(SparseState{{0, 1.0}});
  EXPECT_EQ(out.size(), 4u);
  const SparseFlip big = flip_oracle_lazy(world, 4);
  const SparseState twice = big.apply(big.apply(SparseState{{0, 1.0}}));
  double err = 0.0;
  for (const auto& [idx, amp] : twice) err = std::max(err, std::abs(amp - (idx == 0 ? 1.0 : 0.0)));
  EXPECT_LT(err, 1e-10);
}

TEST(VerifyEval, Cases) {
  const auto world = OracleWorld::flip(10, 3);
  const auto x = BitString::from_string("101");
  const auto a = BitString::from_string("011");
  const auto y = world.O(x);
  EXPECT_EQ(verify_eval_oracle(world, x, y, a), BotValue(world.P(x.concat(a))));
  auto wrong = y;
  wrong.set(0, !wrong[0]);
  EXPECT_TRUE(verify_eval_oracle(world, x, wrong, a).is_bot());
}

TEST(SamplerOracle, IndependentAndUniform) {
  const auto world = OracleWorld::sampler(11, 12);
  SeededRng rng(12);
  const auto [x1, y1] = sampler_oracle(world, 12, rng);
  const auto [x2, y2] = sampler_oracle(world, 12, rng);
  EXPECT_EQ(world.O(x1), y1);
  EXPECT_EQ(world.O(x2), y2);
  std::vector<double> buckets(16, 0.0);
  for (int i = 0; i < 10000; ++i) {
    const auto [x, y] = sampler_oracle(world, 12, rng);
    buckets[x.to_uint() >> 8] += 1;
  }
  EXPECT_LT(chi_square_statistic(buckets), chi_square_critical(16, 0.01));
}

TEST(PrfFromWorld, DeterministicPerKey) {
  for (const auto& world : {OracleWorld::flip(13, 2), OracleWorld::sampler(13, 6)}) {
    const std::size_t n = world.kind() == WorldKind::kFlip ? 2 : 6;
    const auto prf = prfqs_from_world(world, n);
    SeededRng rng(14);
    for (int k = 0; k < 5; ++k) {
      const BotValue key = prf.sample_key(rng);
      ASSERT_FALSE(key.is_bot());
      for (std::uint64_t a = 0; a < (1u << n); ++a) {
        const auto in = BitString::from_uint(a, n);
        const auto first = prf.eval_prf(key.value(), in, rng);
        ASSERT_FALSE(first.is_bot());
        for (int r = 0; r < 3; ++r) EXPECT_EQ(prf.eval_prf(key.value(), in, rng), first);
      }
    }
    auto bad = prf.sample_key(rng).value();
    bad.set(bad.size() - 1, !bad[bad.size() - 1]);
    for (std::uint64_t a = 0; a < (1u << n); ++a) {
      EXPECT_TRUE(prf.eval_prf(bad, BitString::from_uint(a, n), rng).is_bot());
    }
  }
}

TEST(PrfFromWorld, ReseededOutputsUniform) {
  // n = 12 sampler worlds; 8 fixed inputs, top 3 output bits bucketed.
  std::vector<double> buckets(8, 0.0);
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto world = OracleWorld::sampler(1000 + seed, 12);
    const auto prf = prfqs_from_world(world, 12);
    SeededRng rng(seed);
    const auto key = prf.sample_key(rng).value();
    for (std::uint64_t a = 0; a < 8; ++a) {
      buckets[prf.eval_prf(key, BitString::from_uint(a * 397, 12), rng).value().to_uint() >> 9] += 1;
    }
  }
  EXPECT_LT(chi_square_statistic(buckets), chi_square_critical(8, 0.01));
}

TEST(BruteForce, PrgAdversary) {
  const auto gen = toy_expanding_prg(21, 8, 24);
  SeededRng rng(22);
  const auto key = rng.bits(8);
  const auto challenge = gen.eval(key, rng).value();
  EXPECT_EQ(bruteforce_prg_adversary(gen, challenge, SeededRng(1)), 0);
  int ones = 0;
  for (int i = 0; i < 300; ++i) ones += bruteforce_prg_adversary(gen, rng.bits(24), SeededRng(2));
  EXPECT_GE(ones / 300.0, 1.0 - std::ldexp(1.0, -8) - 3.0 * std::sqrt(std::ldexp(1.0, -8) / 300));
  CallBudget tight(10);
  EXPECT_THROW(bruteforce_prg_adversary(gen, challenge, SeededRng(3), 1, &tight), BudgetViolation);
}

TEST(BruteForce, OwsgAdversary) {
  // Injective generator with orthogonal outputs: basis states.
  const auto basis = GeneratorHandle::owsg("basis", 3, 8, [](const BitString& k, SeededRng&) {
    return StateVector::basis(8, k.to_uint());
  });
  SeededRng rng(23);
  for (std::uint64_t k = 0; k < 8; ++k) {
    const std::vector<StateVector> copy{basis.eval_state(BitString::from_uint(k, 3), rng)};
    EXPECT_EQ(bruteforce_owsg_adversary(basis, copy, SeededRng(4)).to_uint(), k);
  }
  EXPECT_THROW(bruteforce_owsg_adversary(keyed_haar_owsg(1, 17, 4), {}, SeededRng(5)), BudgetExceeded);
}

}  // namespace
}  // namespace qsdet
