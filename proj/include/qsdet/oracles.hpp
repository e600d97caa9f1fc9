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
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsdet/bits.hpp"
#include "qsdet/primitives.hpp"
#include "qsdet/qcore.hpp"
#include "qsdet/rng.hpp"

namespace qsdet {

enum class WorldKind { kFlip, kBot, kSampler };

const char* to_string(WorldKind kind);
/// "flip", "bot" or "sampler"; throws InvalidArgument otherwise.
WorldKind world_kind_from_string(std::string_view name);

/// Parameters of the bot-world channel at input length n.
struct BotOracleParams {
  std::size_t n = 0;
  double c = 1.0;
  double mu = 0.0;     // n^-c, the pseudodeterminism error
  std::size_t w = 0;   // smallest w with 2^-w <= mu/4
  std::size_t m = 0;   // output length, > n

  /// Validates 2^-w in [mu/16, mu/4], w <= n and m > n.
  static BotOracleParams make(std::size_t n, double c, std::size_t m);
};

/// Seeded family of random functions for one of the three oracle worlds.
/// Every value is derived on demand from (seed, function id, n, input), so a
/// world is reproducible from its JSON record alone. Bot-world permutations
/// are Fisher-Yates tables built once per n and shared between copies.
///
///   flip:    O_n: n -> 8n bits, P_n: 2n -> n bits
///   bot:     P_n: permutation of n bits, Q_n: n -> n bits, O_n: n -> m(n)
///   sampler: O_n: n -> n bits, P_n: 2n -> n bits
class OracleWorld {
 public:
  static constexpr std::string_view kDerivationId = "philox4x32-10/v1";
  static constexpr std::size_t kMaxN = 20;

  static OracleWorld flip(std::uint64_t seed, std::size_t n_max);
  static OracleWorld sampler(std::uint64_t seed, std::size_t n_max);
  /// m(n) = m_factor * n.
  static OracleWorld bot(std::uint64_t seed, std::size_t n_max, double c = 1.0,
                         std::size_t m_factor = 2);

  WorldKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t n_max() const { return n_max_; }
  double c() const { return c_; }
  std::size_t m_factor() const { return m_factor_; }

  /// Output length of O_n for this world kind.
  std::size_t o_length(std::size_t n) const;
  BotOracleParams bot_params(std::size_t n) const;

  BitString O(const BitString& x) const;
  /// flip/sampler: input is x||a (2n bits). bot: input is x (n bits), and
  /// the result is the permutation image.
  BitString P(const BitString& input) const;
  BitString Q(const BitString& x) const;
  /// Bot-world permutation on integers.
  std::uint64_t permute(std::size_t n, std::uint64_t x) const;

  nlohmann::json to_json() const;
  static OracleWorld from_json(const nlohmann::json& record);

 private:
  struct PermutationCache {
    std::array<std::once_flag, kMaxN + 1> once;
    std::array<std::vector<std::uint32_t>, kMaxN + 1> tables;
  };

  OracleWorld(WorldKind kind, std::uint64_t seed, std::size_t n_max);
  void require_kind(WorldKind kind, const char* what) const;
  void require_n(std::size_t n) const;
  const std::vector<std::uint32_t>& permutation_table(std::size_t n) const;

  WorldKind kind_;
  std::uint64_t seed_;
  std::size_t n_max_;
  double c_ = 1.0;
  std::size_t m_factor_ = 2;
  std::shared_ptr<PermutationCache> cache_;
};

// -- bot world ---------------------------------------------------------------

/// Measures x, computes y = O_n(x), p_x = Q_n(x)/2^n and z = P_n(x); when
/// the first w bits of z are zero, returns bot with probability p_x,
/// otherwise returns y.
BotValue bot_oracle_eval(const OracleWorld& world, const BitString& x, SeededRng& rng);
/// P_n(x)_{[1:w]} != 0^w
bool bot_oracle_is_good(const OracleWorld& world, const BitString& x);
/// Exact probability of bot on input x (0 on the good set).
double bot_oracle_bot_probability(const OracleWorld& world, const BitString& x);
/// All good inputs as integers, ascending. n <= 20.
std::vector<std::uint64_t> bot_oracle_good_set(const OracleWorld& world, std::size_t n);
/// The bot-world channel at length n as a (mu, m)-bot-PRG handle.
GeneratorHandle bot_world_generator(const OracleWorld& world, std::size_t n);

// -- flip world --------------------------------------------------------------

/// Register layout for the flip oracle at n: 9n+1 qubits, index
/// (1 << 9n) | (x << 8n) | y for the marked half.
std::uint64_t flip_register_index(std::size_t n, std::uint64_t x, std::uint64_t y);

/// Dense flip swapping |0^{9n+1}> with 2^{-n/2} |1> sum_x |x>|O_n(x)>.
/// Throws BudgetExceeded when 2^{9n+1} > kDenseStateBudget (n >= 3).
RankTwoFlip flip_oracle(const OracleWorld& world, std::size_t n);

using SparseState = std::map<std::uint64_t, Complex>;

/// Same flip with both vectors held sparsely; usable for n <= 6.
class SparseFlip {
 public:
  SparseFlip(SparseState a, SparseState b);
  SparseState apply(const SparseState& psi) const;
  const SparseState& a() const { return a_; }
  const SparseState& b() const { return b_; }

 private:
  SparseState a_;
  SparseState b_;
};

SparseFlip flip_oracle_lazy(const OracleWorld& world, std::size_t n);
std::uint64_t measure_sparse(const SparseState& psi, SeededRng& rng);

/// P_n(x, a) if O_n(x) = y, bot otherwise (flip and sampler worlds).
BotValue verify_eval_oracle(const OracleWorld& world, const BitString& x, const BitString& y,
                            const BitString& a);

// -- sampler world -----------------------------------------------------------

/// Fresh uniform x paired with O_n(x).
std::pair<BitString, BitString> sampler_oracle(const OracleWorld& world, std::size_t n, SeededRng& rng);

/// PRF with quantum key sampling: the key (x, O_n(x)) comes from measuring
/// sigma_n|0> (flip world) or from the sampler; F_k(a) = verify(x, y, a).
GeneratorHandle prfqs_from_world(const OracleWorld& world, std::size_t n);

// -- exhaustive-search adversaries ------------------------------------------

/// Largest key space the brute-force adversaries will enumerate.
inline constexpr std::size_t kMaxBruteForcePrgKeyBits = 20;
inline constexpr std::size_t kMaxBruteForceOwsgKeyBits = 16;

/// Evaluates `candidate` `votes` times on every key and returns 0 (guess
/// "pseudorandom") iff some key's modal output equals the challenge, else 1.
/// Each evaluation is charged to `budget` when one is given.
int bruteforce_prg_adversary(const GeneratorHandle& candidate, const BitString& challenge,
                             const SeededRng& rng, std::size_t votes = 1,
                             CallBudget* budget = nullptr);

/// Maximum-likelihood key search: argmax over keys of the product of
/// fidelities between gen(key) and each copy. Ties go to the smaller key.
BitString bruteforce_owsg_adversary(const GeneratorHandle& gen, std::span<const StateVector> copies,
                                    const SeededRng& rng, CallBudget* budget = nullptr);

}  // namespace qsdet
