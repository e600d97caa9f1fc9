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

#include "qsdet/primitives.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "qsdet/constructions.hpp"
#include "qsdet/errors.hpp"
#include "qsdet/oracles.hpp"

namespace qsdet {
namespace {

BotValue bits(const char* s) { return BitString::from_string(s); }

TEST(IsBot, Cases) {
  const BitString b = BitString::from_string("1011");
  EXPECT_TRUE(is_bot(BotValue::bot(), b).is_bot());
  EXPECT_EQ(is_bot(bits("0000"), b), bits("1011"));
  EXPECT_EQ(is_bot(bits("0110"), BitString::from_string("0110")), bits("0110"));
}

TEST(Vote, Cases) {
  const std::vector<BotValue> majority{bits("01"), bits("10"), bits("10")};
  EXPECT_EQ(vote(majority), bits("10"));
  const std::vector<BotValue> tie{bits("00"), bits("11")};
  EXPECT_EQ(vote(tie), bits("00"));
  const std::vector<BotValue> bots{BotValue::bot(), BotValue::bot(), bits("11")};
  EXPECT_TRUE(vote(bots).is_bot());
  EXPECT_THROW(vote(std::vector<BotValue>{}), InvalidArgument);
}

TEST(VoteNonBot, Cases) {
  const std::vector<BotValue> all{BotValue::bot(), BotValue::bot(), BotValue::bot()};
  EXPECT_TRUE(vote_non_bot(all).is_bot());
  const std::vector<BotValue> one{BotValue::bot(), bits("01"), BotValue::bot()};
  EXPECT_EQ(vote_non_bot(one), bits("01"));
  const std::vector<BotValue> yz{bits("00"), bits("11"), bits("11")};
  EXPECT_EQ(vote_non_bot(yz), bits("11"));
  const std::vector<BotValue> tie{BotValue::bot(), bits("10"), bits("01"), BotValue::bot()};
  EXPECT_EQ(vote_non_bot(tie), bits("10"));
}

TEST(GeneratorHandle, KindChecks) {
  const auto prg = GeneratorHandle::prg("id", 3, 3, [](const BitString& k, SeededRng&) -> BotValue { return k; });
  SeededRng rng(1);
  EXPECT_EQ(prg.kind(), GeneratorKind::kPrg);
  EXPECT_FALSE(prg.is_state_valued());
  EXPECT_THROW((void)prg.eval_state(BitString::zeros(3), rng), InvalidArgument);
  EXPECT_THROW((void)prg.eval(BitString::zeros(2), rng), InvalidArgument);
  EXPECT_EQ(prg.sample_key(rng).value().size(), 3u);
  const auto bad = [](const BitString& k, SeededRng&) -> BotValue { return k; };
  EXPECT_THROW(GeneratorHandle::bot_prg("x", 4, 4, bad), InvalidArgument);
  EXPECT_THROW(GeneratorHandle::prg_qs("x", 4, 3, [](SeededRng&) -> BotValue { return BotValue::bot(); }, bad),
               InvalidArgument);
  EXPECT_STREQ(to_string(GeneratorKind::kSprsQs), "sprs-qs");
}

TEST(CallBudget, ThrowsOnOverrun) {
  CallBudget budget(3);
  budget.charge(2);
  budget.charge();
  EXPECT_EQ(budget.used(), 3u);
  EXPECT_THROW(budget.charge(), BudgetViolation);
}

TEST(DeterminismAudit, ConstantGenerator) {
  const auto gen = GeneratorHandle::prg("const", 4, 8, [](const BitString&, SeededRng&) -> BotValue {
    return BitString::from_string("10101010");
  });
  const auto audit = determinism_audit(gen, BitString::zeros(4), 100, SeededRng(2));
  EXPECT_DOUBLE_EQ(audit.modal_frequency, 1.0);
  EXPECT_EQ(audit.distinct_outputs, 1u);
  EXPECT_EQ(std::get<BotValue>(audit.modal_value), bits("10101010"));
  EXPECT_THROW(determinism_audit(gen, BitString::zeros(4), 1, SeededRng(2)), InvalidArgument);
}

TEST(DeterminismAudit, FairCoinGenerator) {
  const auto gen = GeneratorHandle::prg("coin", 1, 1, [](const BitString&, SeededRng& rng) -> BotValue {
    return BitString::from_uint(rng.coin() ? 1 : 0, 1);
  });
  constexpr std::size_t kN = 10000;
  const auto audit = determinism_audit(gen, BitString::zeros(1), kN, SeededRng(3));
  // The modal frequency of a fair coin is max(p, 1 - p) >= 1/2.
  EXPECT_NEAR(audit.modal_frequency, 0.5, 3.0 * std::sqrt(0.25 / kN));
  EXPECT_EQ(audit.distinct_outputs, 2u);
}

TEST(DeterminismAudit, StateOutputsCluster) {
  const auto gen = keyed_haar_sprs(5, 6, 16);
  const auto audit = determinism_audit(gen, BitString::from_uint(9, 6), 20, SeededRng(4));
  EXPECT_DOUBLE_EQ(audit.modal_frequency, 1.0);
  EXPECT_TRUE(std::holds_alternative<StateVector>(audit.modal_value));
}

TEST(DeterminismAudit, ConstructionOneOnSampledKey) {
  const OracleWorld world = OracleWorld::bot(77, 16, 1.0, 2);
  const Con1Params params = Con1Params::make(16, bot_world_generator(world, 16));
  SeededRng rng(5);
  BotValue key = con1_qsamp(params, rng);
  ASSERT_FALSE(key.is_bot());
  const auto audit = determinism_audit(con1_generator(params), key.value(), 100, SeededRng(6));
  EXPECT_GE(audit.modal_frequency, 0.99);
}

}  // namespace
}  // namespace qsdet
