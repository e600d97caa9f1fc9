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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsdet/parallel.hpp"
#include "qsdet/primitives.hpp"

namespace qsdet {

struct AdvantageEstimate {
  double estimate;  // successes/trials - 1/2
  double lo;        // Wilson 95% bounds, shifted by -1/2
  double hi;
};

/// Wilson score interval at 95% for the success probability, reported as
/// an advantage over 1/2.
AdvantageEstimate advantage_ci(std::uint64_t successes, std::uint64_t trials);

struct ExperimentReport {
  std::string name;
  nlohmann::json parameters;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double advantage = 0.0;
  std::array<double, 2> ci95{0.0, 0.0};
  double wallclock_ms = 0.0;

  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
  bool ci_contains(double value) const { return ci95[0] <= value && value <= ci95[1]; }
  nlohmann::json to_json() const;
};

/// Sums successes and trials; parameters and seed are taken from `a`.
ExperimentReport merge_reports(const ExperimentReport& a, const ExperimentReport& b);

/// A distinguishing or inverting strategy. Calls it makes to the generator
/// are charged to a per-trial CallBudget of `work_budget`; an adversary whose
/// oracle_access lacks "gen" gets a budget of zero.
struct AdversaryHandle {
  using Distinguisher = std::function<int(std::span<const BotValue> samples, const GeneratorHandle& gen,
                                          CallBudget& budget, SeededRng& rng)>;
  using Inverter = std::function<BitString(std::span<const StateVector> copies, const GeneratorHandle& gen,
                                           CallBudget& budget, SeededRng& rng)>;

  std::string strategy_id;
  std::uint64_t work_budget = 0;
  std::vector<std::string> oracle_access;
  Distinguisher distinguish;
  Inverter invert;

  bool can_query_generator() const;
};

AdversaryHandle coin_flip_adversary();
AdversaryHandle constant_adversary(int guess);
/// Guesses 0 iff bits [prefix_bits, s) of the first sample are all zero.
AdversaryHandle padding_check_adversary(std::size_t prefix_bits);
/// Guesses the parity of the number of bot samples.
AdversaryHandle bot_count_adversary();
/// Exhaustive search over all 2^key_bits keys on the first non-bot sample.
AdversaryHandle bruteforce_prg_adversary_handle(std::size_t key_bits, std::size_t votes = 1);
AdversaryHandle bruteforce_owsg_adversary_handle(std::size_t key_bits);

/// b uniform; y = gen(k) for uniform k if b = 0, otherwise uniform s bits.
ExperimentReport exp_prg(const GeneratorHandle& gen, const AdversaryHandle& adversary, std::uint64_t trials,
                         const SeededRng& rng, Exec exec = Exec::kParallel);
/// b = 0: q fresh evaluations of gen(k); b = 1: q values Is-bot(gen(k), y)
/// for a single uniform y.
ExperimentReport exp_botprg(const GeneratorHandle& gen, const AdversaryHandle& adversary, std::size_t q,
                            std::uint64_t trials, const SeededRng& rng, Exec exec = Exec::kParallel);
/// t copies of gen(k) to the adversary; success is a Bernoulli draw with the
/// exact fidelity between gen(k') and a fresh copy of gen(k).
ExperimentReport exp_owsg(const GeneratorHandle& gen, const AdversaryHandle& adversary, std::size_t t,
                          std::uint64_t trials, const SeededRng& rng, Exec exec = Exec::kParallel);

enum class MomentMode { kExactEnum, kMonteCarlo };

struct MomentDistance {
  double distance = 0.0;
  /// 95% half-width from a 10-group jackknife (0 in exact-enum mode).
  double ci_half_width = 0.0;
  MomentMode mode = MomentMode::kExactEnum;
  std::uint64_t keys_used = 0;
  std::uint64_t bot_keys = 0;  // sampler returned bot; excluded from the average
};

/// Largest key space averaged exactly.
inline constexpr std::size_t kMaxExactEnumKeyBits = 16;

/// Trace distance between the key-averaged t-copy state of gen and the Haar
/// t-copy moment. Exact-enum averages gen over every key uniformly (key
/// space <= 2^16); Monte-Carlo draws n_keys keys through gen's sampler.
/// Throws BudgetExceeded when dim^t > kDenseOperatorBudget.
MomentDistance moment_distance(const GeneratorHandle& gen, std::size_t t, std::uint64_t n_keys,
                               MomentMode mode, const SeededRng& rng, Exec exec = Exec::kParallel);

/// Exact trace distance between E_f |psi_f><psi_f|^{(x)t} over uniformly
/// random f: [N] -> Z_N (phase states) and the Haar t-copy moment, for t < N.
/// Both operators are block diagonal over multisets of t indices, each block
/// proportional to the all-ones matrix, so the distance reduces to a sum
/// over multisets.
double phase_moment_distance_exact(std::size_t N, std::size_t t);

// -- toy generators ---------------------------------------------------------

/// Oracle-free keyed expansion {0,1}^lambda -> {0,1}^s.
GeneratorHandle toy_expanding_prg(std::uint64_t seed, std::size_t lambda, std::size_t s);
/// k -> k || 0^(s - lambda).
GeneratorHandle zero_padding_prg(std::size_t lambda, std::size_t s);
/// Key k maps to a Haar sample drawn from a stream keyed by (seed, k).
GeneratorHandle keyed_haar_owsg(std::uint64_t seed, std::size_t key_bits, std::size_t dim);
/// Key k maps to |last bit of k> in dimension 2; a uniformly random key
/// guess succeeds with probability exactly 1/2.
GeneratorHandle parity_owsg(std::size_t key_bits);
/// Phase states of uniformly random functions f: [N] -> Z_N, keyed by the
/// N * log2(N) bits describing f.
GeneratorHandle random_function_phase_sprs(std::size_t N);

}  // namespace qsdet
