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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "qsdet/bits.hpp"
#include "qsdet/qcore.hpp"
#include "qsdet/rng.hpp"

namespace qsdet {

enum class GeneratorKind { kPrg, kPrgQs, kBotPrg, kSprsQs, kPrfQs, kOwsg };

const char* to_string(GeneratorKind kind);

/// Type-erased primitive: a randomized evaluation map plus, for the
/// quantum-input-sampling kinds, a key sampler. All callables must be safe
/// to invoke concurrently; per-call randomness comes from the supplied rng.
class GeneratorHandle {
 public:
  using BitsEval = std::function<BotValue(const BitString& key, SeededRng& rng)>;
  using StateEval = std::function<StateVector(const BitString& key, SeededRng& rng)>;
  using PrfEval =
      std::function<BotValue(const BitString& key, const BitString& input, SeededRng& rng)>;
  using KeySampler = std::function<BotValue(SeededRng& rng)>;

  /// Uniform-key PRG {0,1}^input -> {0,1}^output.
  static GeneratorHandle prg(std::string name, std::size_t input_length, std::size_t output_length,
                             BitsEval eval);
  /// Requires output_length > input_length.
  static GeneratorHandle prg_qs(std::string name, std::size_t input_length,
                                std::size_t output_length, KeySampler qsamp, BitsEval eval);
  /// Requires output_length > input_length.
  static GeneratorHandle bot_prg(std::string name, std::size_t input_length,
                                 std::size_t output_length, BitsEval eval);
  static GeneratorHandle sprs_qs(std::string name, std::size_t key_length, std::size_t dim,
                                 KeySampler qsamp, StateEval eval);
  static GeneratorHandle owsg(std::string name, std::size_t key_length, std::size_t dim,
                              StateEval eval);
  static GeneratorHandle prf_qs(std::string name, std::size_t key_length, std::size_t input_length,
                                std::size_t output_length, KeySampler qsamp, PrfEval eval);

  GeneratorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t input_length() const { return input_length_; }
  std::size_t output_length() const { return output_length_; }
  /// State dimension (state-valued kinds) or 0.
  std::size_t state_dim() const { return state_dim_; }
  /// PRF input length (prf-qs) or 0.
  std::size_t prf_input_length() const { return prf_input_length_; }

  bool is_state_valued() const { return kind_ == GeneratorKind::kSprsQs || kind_ == GeneratorKind::kOwsg; }
  bool has_quantum_sampler() const { return static_cast<bool>(qsamp_); }

  /// Bit-valued kinds only.
  BotValue eval(const BitString& key, SeededRng& rng) const;
  /// State-valued kinds only.
  StateVector eval_state(const BitString& key, SeededRng& rng) const;
  /// prf-qs only.
  BotValue eval_prf(const BitString& key, const BitString& input, SeededRng& rng) const;
  /// Quantum key sampler when present, otherwise a uniform key of input_length bits.
  BotValue sample_key(SeededRng& rng) const;

 private:
  GeneratorHandle() = default;
  void check_key(const BitString& key) const;

  GeneratorKind kind_ = GeneratorKind::kPrg;
  std::string name_;
  std::size_t input_length_ = 0;
  std::size_t output_length_ = 0;
  std::size_t state_dim_ = 0;
  std::size_t prf_input_length_ = 0;
  BitsEval bits_eval_;
  StateEval state_eval_;
  PrfEval prf_eval_;
  KeySampler qsamp_;
};

/// Counts oracle calls against a declared limit; charge() throws
/// BudgetViolation once the limit would be exceeded.
class CallBudget {
 public:
  explicit CallBudget(std::uint64_t limit) : limit_(limit) {}
  void charge(std::uint64_t calls = 1);
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// bot if a is bot, otherwise b.
BotValue is_bot(const BotValue& a, const BitString& b);

/// Most common element; ties go to the element whose first occurrence is
/// earliest. bot is an eligible element. Throws on an empty list.
BotValue vote(std::span<const BotValue> values);
/// bot if every entry is bot, else the first most common non-bot entry.
BotValue vote_non_bot(std::span<const BotValue> values);

struct DeterminismAudit {
  BitString key;
  std::size_t trials = 0;
  /// Modal output: a BotValue for bit-valued generators, a representative
  /// state for state-valued ones.
  std::variant<BotValue, StateVector> modal_value;
  double modal_frequency = 0.0;
  std::size_t distinct_outputs = 0;
};

/// Fidelity threshold for treating two state outputs as the same.
inline constexpr double kStateClusterFidelity = 1.0 - 1e-8;

/// Evaluates gen `trials` times on key (evaluation i uses rng.split(i)) and
/// reports the modal output. State outputs are clustered greedily by
/// fidelity >= kStateClusterFidelity. For prf-qs the audited map is
/// key -> F_key(prf_input). Throws if trials < 2.
DeterminismAudit determinism_audit(const GeneratorHandle& gen, const BitString& key,
                                   std::size_t trials, const SeededRng& rng,
                                   const std::optional<BitString>& prf_input = std::nullopt);

}  // namespace qsdet
