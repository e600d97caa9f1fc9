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

#include "qsdet/bits.hpp"

#include <gtest/gtest.h>

#include "qsdet/errors.hpp"

namespace qsdet {
namespace {

TEST(BitString, ParsesAndPrints) {
  const BitString b = BitString::from_string("1011");
  EXPECT_EQ(b.size(), 4u);
  EXPECT_TRUE(b[0]);
  EXPECT_FALSE(b[1]);
  EXPECT_EQ(b.to_string(), "1011");
  EXPECT_EQ(b.to_uint(), 11u);
  EXPECT_THROW(BitString::from_string("10x1"), InvalidArgument);
}

TEST(BitString, FromUintIsMostSignificantFirst) {
  EXPECT_EQ(BitString::from_uint(6, 4).to_string(), "0110");
  EXPECT_EQ(BitString::from_uint(0xFF, 3).to_string(), "111");
  EXPECT_EQ(BitString::from_uint(~0ull, 64).to_uint(), ~0ull);
  EXPECT_THROW(BitString::from_uint(1, 65), InvalidArgument);
}

TEST(BitString, SliceConcatAndPrefix) {
  const BitString b = BitString::from_string("11100100");
  EXPECT_EQ(b.slice(2, 6).to_string(), "1001");
  EXPECT_EQ(b.slice(0, 2).concat(b.slice(6, 8)).to_string(), "1100");
  EXPECT_TRUE(BitString::from_string("0001").prefix_is_zero(3));
  EXPECT_FALSE(BitString::from_string("0001").prefix_is_zero(4));
  EXPECT_TRUE(BitString::zeros(5).all_zero());
  EXPECT_THROW(b.slice(3, 9), InvalidArgument);
}

TEST(BotValue, BotAndValue) {
  const BotValue bot = BotValue::bot();
  const BotValue v = BitString::from_string("01");
  EXPECT_TRUE(bot.is_bot());
  EXPECT_FALSE(v.is_bot());
  EXPECT_EQ(bot.to_string(), "⊥");
  EXPECT_EQ(v.to_string(), "01");
  EXPECT_NE(bot, v);
  EXPECT_THROW((void)bot.value(), std::logic_error);
}

}  // namespace
}  // namespace qsdet
