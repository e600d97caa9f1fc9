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

#include "qsdet/experiments.hpp"

#include <cmath>

#include <boost/math/distributions/beta.hpp>
#include <gtest/gtest.h>

#include "qsdet/errors.hpp"
#include "qsdet/oracles.hpp"

namespace qsdet {
namespace {

// Clopper-Pearson 95% interval, shifted by -1/2.
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n) {
  const double lo = k == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), 0.025);
  const double hi = k == n ? 1.0 : boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k), 0.975);
  return {lo - 0.5, hi - 0.5};
}

TEST(AdvantageCi, Examples) {
  const auto half = advantage_ci(500, 1000);
  EXPECT_DOUBLE_EQ(half.estimate, 0.0);
  EXPECT_LE(half.lo, 0.0);
  EXPECT_GE(half.hi, 0.0);
  const auto all = advantage_ci(1000, 1000);
  EXPECT_DOUBLE_EQ(all.estimate, 0.5);
  EXPECT_DOUBLE_EQ(all.hi, 0.5);
  const auto six = advantage_ci(600, 1000);
  EXPECT_NEAR(six.estimate, 0.1, 1e-12);
  EXPECT_NEAR(six.lo, 0.0693, 5e-4);
  EXPECT_NEAR(six.hi, 0.1299, 5e-4);
  const auto [cp_lo, cp_hi] = clopper_pearson(600, 1000);
  EXPECT_NEAR(six.lo, cp_lo, 0.002);
  EXPECT_NEAR(six.hi, cp_hi, 0.002);
  EXPECT_THROW(advantage_ci(3, 2), InvalidArgument);
  EXPECT_THROW(advantage_ci(0, 0), InvalidArgument);
}

TEST(Reports, MergeIsAssociativeAndCommutative) {
  const auto gen = toy_expanding_prg(1, 6, 12);
  const auto adv = coin_flip_adversary();
  const auto a = exp_prg(gen, adv, 100, SeededRng(1));
  const auto b = exp_prg(gen, adv, 200, SeededRng(2));
  const auto c = exp_prg(gen, adv, 300, SeededRng(3));
  const auto left = merge_reports(merge_reports(a, b), c);
  const auto right = merge_reports(a, merge_reports(c, b));
  EXPECT_EQ(left.trials, 600u);
  EXPECT_EQ(left.successes, right.successes);
  EXPECT_EQ(left.advantage, right.advantage);
  EXPECT_EQ(left.ci95, right.ci95);
  EXPECT_EQ(left.successes, a.successes + b.successes + c.successes);
  const auto j = left.to_json();
  for (const char* key : {"name", "parameters", "seed", "trials", "successes", "advantage", "ci95", "wallclock_ms"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_THROW(merge_reports(a, exp_owsg(parity_owsg(2), coin_flip_adversary(), 1, 10, SeededRng(4))),
               InvalidArgument);
}

TEST(ExpPrg, ConstantAdversaryHasNoAdvantage) {
  const auto rep = exp_prg(toy_expanding_prg(2, 8, 24), constant_adversary(0), 2000, SeededRng(5));
  EXPECT_TRUE(rep.ci_contains(0.0));
}

TEST(ExpPrg, PaddingCheckIsPerfect) {
  const auto rep = exp_prg(zero_padding_prg(8, 24), padding_check_adversary(8), 1000, SeededRng(6));
  EXPECT_TRUE(rep.ci_contains(0.5));
  EXPECT_GT(rep.advantage, 0.49);
}

TEST(ExpPrg, BruteForceBreaksToyPrg) {
  const auto rep = exp_prg(toy_expanding_prg(3, 8, 24), bruteforce_prg_adversary_handle(8), 1000, SeededRng(7));
  EXPECT_GE(rep.advantage, 0.45);
}

TEST(ExpPrg, SerialMatchesParallel) {
  const auto gen = toy_expanding_prg(4, 8, 24);
  const auto adv = bruteforce_prg_adversary_handle(8);
  const auto a = exp_prg(gen, adv, 300, SeededRng(8), Exec::kSerial);
  const auto b = exp_prg(gen, adv, 300, SeededRng(8), Exec::kParallel);
  EXPECT_EQ(a.successes, b.successes);
}

TEST(ExpPrg, BudgetEnforced) {
  auto adv = bruteforce_prg_adversary_handle(8);
  adv.work_budget = 10;
  EXPECT_THROW(exp_prg(toy_expanding_prg(5, 8, 24), adv, 10, SeededRng(9)), BudgetViolation);
  adv.oracle_access.clear();
  adv.work_budget = 1 << 20;
  EXPECT_THROW(exp_prg(toy_expanding_prg(5, 8, 24), adv, 10, SeededRng(9)), BudgetViolation);
}

TEST(ExpBotPrg, CoinFlipAndBotCountHaveNoAdvantage) {
  const auto world = OracleWorld::bot(10, 8);
  const auto gen = bot_world_generator(world, 8);
  EXPECT_TRUE(exp_botprg(gen, coin_flip_adversary(), 4, 2000, SeededRng(10)).ci_contains(0.0));
  EXPECT_TRUE(exp_botprg(gen, bot_count_adversary(), 4, 2000, SeededRng(11)).ci_contains(0.0));
}

TEST(ExpBotPrg, SingleQueryMatchesPrgExperiment) {
  const auto inner = toy_expanding_prg(12, 8, 24);
  const auto as_bot = GeneratorHandle::bot_prg("never-bot", 8, 24, [inner](const BitString& k, SeededRng& rng) {
    return inner.eval(k, rng);
  });
  const auto adv = bruteforce_prg_adversary_handle(8);
  const auto a = exp_prg(as_bot, adv, 400, SeededRng(13));
  const auto b = exp_botprg(as_bot, adv, 1, 400, SeededRng(13));
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_THROW(exp_botprg(as_bot, adv, 0, 10, SeededRng(13)), InvalidArgument);
}

TEST(ExpOwsg, TrueKeyAndOrthogonalKey) {
  const auto basis = GeneratorHandle::owsg("basis", 3, 8, [](const BitString& k, SeededRng&) {
    return StateVector::basis(8, k.to_uint());
  });
  AdversaryHandle truthful;
  truthful.strategy_id = "truthful";
  truthful.invert = [](std::span<const StateVector> copies, const GeneratorHandle&, CallBudget&, SeededRng&) {
    for (std::size_t i = 0; i < 8; ++i) {
      if (std::norm(copies[0][i]) > 0.5) return BitString::from_uint(i, 3);
    }
    return BitString::zeros(3);
  };
  AdversaryHandle wrong = truthful;
  wrong.invert = [](std::span<const StateVector> copies, const GeneratorHandle&, CallBudget&, SeededRng&) {
    for (std::size_t i = 0; i < 8; ++i) {
      if (std::norm(copies[0][i]) > 0.5) return BitString::from_uint((i + 1) % 8, 3);
    }
    return BitString::zeros(3);
  };
  EXPECT_EQ(exp_owsg(basis, truthful, 1, 200, SeededRng(14)).successes, 200u);
  EXPECT_EQ(exp_owsg(basis, wrong, 1, 200, SeededRng(15)).successes, 0u);
}

TEST(ExpOwsg, ConstantGeneratorAlwaysPasses) {
  const auto constant = GeneratorHandle::owsg("const", 4, 4, [](const BitString&, SeededRng&) {
    return StateVector::uniform(4);
  });
  EXPECT_EQ(exp_owsg(constant, coin_flip_adversary(), 2, 300, SeededRng(16)).successes, 300u);
}

TEST(ExpOwsg, BruteForceWinsHalf) {
  const auto rep =
      exp_owsg(keyed_haar_owsg(17, 8, 8), bruteforce_owsg_adversary_handle(8), 2, 500, SeededRng(18));
  EXPECT_GE(rep.success_rate(), 0.5);
}

TEST(ExpOwsg, ParityCoinFlipIsHalf) {
  const auto rep = exp_owsg(parity_owsg(8), coin_flip_adversary(), 1, 4000, SeededRng(19));
  EXPECT_TRUE(rep.ci_contains(0.0));
}

TEST(MomentDistance, HaarSamplerIsClose) {
  const auto haar = GeneratorHandle::sprs_qs(
      "haar", 1, 8, [](SeededRng& rng) -> BotValue { return rng.bits(1); },
      [](const BitString&, SeededRng& rng) { return haar_sample(8, rng); });
  constexpr std::uint64_t kKeys = 20000;
  const auto md = moment_distance(haar, 1, kKeys, MomentMode::kMonteCarlo, SeededRng(20));
  // E ||avg - I/d||_1 / 2 <= sqrt(d (1 - 1/d) / n) / 2 for rank-one samples.
  EXPECT_LE(md.distance, 2.0 * 0.5 * std::sqrt(7.0 / kKeys));
  EXPECT_GT(md.ci_half_width, 0.0);
  EXPECT_EQ(md.keys_used, kKeys);
}

TEST(MomentDistance, ConstantStateClosedForm) {
  const auto constant = GeneratorHandle::owsg("const", 3, 8, [](const BitString&, SeededRng&) {
    return StateVector::basis(8, 0);
  });
  const auto md = moment_distance(constant, 1, 0, MomentMode::kExactEnum, SeededRng(21));
  EXPECT_NEAR(md.distance, 1.0 - 1.0 / 8.0, 1e-10);
  EXPECT_EQ(md.keys_used, 8u);
  EXPECT_THROW(moment_distance(keyed_haar_owsg(1, 17, 2), 1, 0, MomentMode::kExactEnum, SeededRng(1)),
               BudgetExceeded);
  EXPECT_THROW(moment_distance(constant, 4, 100, MomentMode::kMonteCarlo, SeededRng(1)), BudgetExceeded);
}

TEST(MomentDistance, PhaseStatesMatchClosedForm) {
  // For uniformly random f the t = 2 distance is (N - 1) / (N (N + 1)).
  for (std::size_t N : {4u, 8u, 64u}) {
    EXPECT_NEAR(phase_moment_distance_exact(N, 2), (N - 1.0) / (N * (N + 1.0)), 1e-12) << N;
  }
  const auto md = moment_distance(random_function_phase_sprs(8), 2, 100000, MomentMode::kMonteCarlo, SeededRng(22));
  EXPECT_LE(md.distance, 0.25);
  EXPECT_LE(md.ci_half_width, 0.02);
  EXPECT_NEAR(md.distance, 7.0 / 72.0, 0.005);
}

TEST(MomentDistance, PhaseExactEnumAtN2) {
  // N = 2 keys have 2 bits, so the four functions enumerate exactly.
  const auto md = moment_distance(random_function_phase_sprs(2), 1, 0, MomentMode::kExactEnum, SeededRng(23));
  EXPECT_NEAR(md.distance, 0.0, 1e-12);
  const auto md2 = moment_distance(random_function_phase_sprs(2), 2, 0, MomentMode::kExactEnum, SeededRng(23));
  // t = N is outside the block formula; value from a direct dense computation.
  EXPECT_NEAR(md2.distance, 1.0 / 3.0, 1e-12);
  EXPECT_THROW(phase_moment_distance_exact(2, 2), InvalidArgument);
}

TEST(ToyGenerators, Shapes) {
  SeededRng rng(24);
  const auto toy = toy_expanding_prg(1, 8, 24);
  const auto k = rng.bits(8);
  EXPECT_EQ(toy.eval(k, rng), toy.eval(k, rng));
  EXPECT_EQ(toy.eval(k, rng).value().size(), 24u);
  EXPECT_EQ(zero_padding_prg(4, 8).eval(BitString::from_string("1011"), rng),
            BotValue(BitString::from_string("10110000")));
  const auto owsg = keyed_haar_owsg(2, 6, 8);
  EXPECT_NEAR(fidelity(owsg.eval_state(k.slice(0, 6), rng), owsg.eval_state(k.slice(0, 6), rng)), 1.0, 1e-12);
  EXPECT_EQ(random_function_phase_sprs(8).input_length(), 24u);
}

}  // namespace
}  // namespace qsdet
