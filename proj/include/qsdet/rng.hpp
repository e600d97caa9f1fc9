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

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

#include "qsdet/bits.hpp"

namespace qsdet {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key); every random value in the library is derived from it.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632BE59BD9B4E019ull));
}

/// Counter-based generator. The stream is fully determined by
/// (algorithm, seed, stream id); `counter` counts consumed 128-bit blocks.
/// Single-owner: copy it to fork, use split() for independent substreams.
class SeededRng {
 public:
  static constexpr std::string_view kAlgorithmId = "philox4x32-10";

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t counter = 0)
      : seed_(seed), stream_(stream), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  /// Independent child stream; does not advance this generator.
  SeededRng split(std::uint64_t index) const {
    return SeededRng(seed_, hash_combine(stream_, index), 0);
  }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Standard normal via Box-Muller; the second deviate of a pair is cached.
  double normal();
  /// Uniform on [0, bound); bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t bound);
  bool coin() { return (next_u64() >> 63) != 0; }
  BitString bits(std::size_t length);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Keyed pseudorandom function used for lazily derived oracle tables:
/// (key, domain, n, input) -> `length` output bits. Distinct domains give
/// independent functions.
BitString derive_bits(std::uint64_t key, std::uint32_t domain, std::uint32_t n,
                      std::uint64_t input, std::size_t length);

}  // namespace qsdet
