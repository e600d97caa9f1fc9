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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsdet {

/// Fixed-length bit string, index 0 is the most significant (leftmost) bit.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}

  /// Parses "0101..."; throws InvalidArgument on any other character.
  static BitString from_string(std::string_view text);
  /// Low `length` bits of `value`, most significant first. length <= 64.
  static BitString from_uint(std::uint64_t value, std::size_t length);
  static BitString zeros(std::size_t length) { return BitString(length); }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  /// Big-endian integer value; size() must be <= 64.
  std::uint64_t to_uint() const;
  std::string to_string() const;

  /// Bits [begin, end).
  BitString slice(std::size_t begin, std::size_t end) const;
  BitString concat(const BitString& tail) const;
  bool all_zero() const;
  bool prefix_is_zero(std::size_t width) const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A bit string or the abort symbol.
class BotValue {
 public:
  BotValue() = default;  // bot
  BotValue(BitString value) : value_(std::move(value)) {}  // NOLINT(implicit)
  static BotValue bot() { return BotValue(); }

  bool is_bot() const { return !value_.has_value(); }
  const BitString& value() const;

  /// "⊥" for the abort symbol, otherwise the bit string.
  std::string to_string() const;

  friend bool operator==(const BotValue&, const BotValue&) = default;

 private:
  std::optional<BitString> value_;
};

}  // namespace qsdet
