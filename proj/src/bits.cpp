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

#include <algorithm>

#include "qsdet/errors.hpp"

namespace qsdet {

BitString BitString::from_string(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw InvalidArgument("bit string may contain only '0' and '1': " + std::string(text));
    }
    out.bits_[i] = text[i] == '1' ? 1 : 0;
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t length) {
  if (length > 64) throw InvalidArgument("from_uint supports at most 64 bits");
  BitString out(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.bits_[length - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1u);
  }
  return out;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw InvalidArgument("to_uint supports at most 64 bits");
  std::uint64_t v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

BitString BitString::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > bits_.size()) throw InvalidArgument("bit slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                   bits_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

BitString BitString::concat(const BitString& tail) const {
  BitString out = *this;
  out.bits_.insert(out.bits_.end(), tail.bits_.begin(), tail.bits_.end());
  return out;
}

bool BitString::all_zero() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

bool BitString::prefix_is_zero(std::size_t width) const {
  if (width > bits_.size()) throw InvalidArgument("prefix width exceeds bit string length");
  return std::all_of(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(width),
                     [](std::uint8_t b) { return b == 0; });
}

const BitString& BotValue::value() const {
  if (!value_) throw InvalidArgument("value() called on bot");
  return *value_;
}

std::string BotValue::to_string() const { return value_ ? value_->to_string() : "⊥"; }

}  // namespace qsdet
