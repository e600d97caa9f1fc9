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
#include <numbers>

#include "qsdet/errors.hpp"

namespace qsdet {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

void SeededRng::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  buffer_[1] = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
  buffered_ = 2;
  ++counter_;
}

std::uint64_t SeededRng::next_u64() {
  if (buffered_ == 0) refill();
  return buffer_[2 - buffered_--];
}

double SeededRng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t SeededRng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below: bound must be positive");
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

BitString SeededRng::bits(std::size_t length) {
  BitString out(length);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) word = next_u64();
    out.set(i, (word >> (63 - i % 64)) & 1u);
  }
  return out;
}

BitString derive_bits(std::uint64_t key, std::uint32_t domain, std::uint32_t n,
                      std::uint64_t input, std::size_t length) {
  const std::uint64_t k = mix64(key ^ 0xD1B54A32D192ED03ull);
  const std::array<std::uint32_t, 2> philox_key = {static_cast<std::uint32_t>(k),
                                                   static_cast<std::uint32_t>(k >> 32)};
  BitString out(length);
  std::array<std::uint32_t, 4> block{};
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 128 == 0) {
      const auto block_index = static_cast<std::uint32_t>(i / 128);
      block = philox4x32_10({static_cast<std::uint32_t>(input),
                             static_cast<std::uint32_t>(input >> 32),
                             (domain << 8) | (n & 0xFFu), block_index},
                            philox_key);
    }
    const std::size_t j = i % 128;
    out.set(i, (block[j / 32] >> (31 - j % 32)) & 1u);
  }
  return out;
}

}  // namespace qsdet
